#include "eddy/errors.hpp"
#include "eddy/spectrum_io.hpp"

#include <doctest.h>

#include <cstring>
#include <random>
#include <string>

using namespace eddy;

namespace {

InductanceSpectrum random_spectrum(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  InductanceSpectrum s;
  s.model = ModelKind::dodd_deeds;
  double f = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    f *= 1.0 + std::abs(u(rng));
    s.frequencies.push_back(f);
    s.delta_L.emplace_back(u(rng) * std::pow(10.0, 20 * u(rng)), u(rng) * 1e-9);
  }
  return s;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::string with_rows(const std::string& rows) {
  return "# model: thin_plate\n# normalized: true\nfreq_hz,dL_re,dL_im\n" + rows;
}

int error_line(const std::string& text) {
  try {
    parse_spectrum_csv(text);
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    const auto pos = msg.find("line ");
    return pos == std::string::npos ? -1 : std::stoi(msg.substr(pos + 5));
  }
  return 0;
}

} // namespace

TEST_CASE("write then read is bit exact") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    InductanceSpectrum s = random_spectrum(seed, 50);
    s.normalized = seed % 2 == 0;
    const Metadata meta{{"plate", "copper"}, {"scenario_hash", "0123456789abcdef"},
                        {"quadrature", "alpha_max_per_m=40000 n_panels=64"}};
    const SpectrumFile f = parse_spectrum_csv(format_spectrum_csv(s, meta));
    CHECK(f.spectrum.model == s.model);
    CHECK(f.spectrum.normalized == s.normalized);
    CHECK(f.metadata == meta);
    REQUIRE(f.spectrum.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(same_bits(f.spectrum.frequencies[i], s.frequencies[i]));
      CHECK(same_bits(f.spectrum.delta_L[i].real(), s.delta_L[i].real()));
      CHECK(same_bits(f.spectrum.delta_L[i].imag(), s.delta_L[i].imag()));
    }
  }
}

TEST_CASE("layout") {
  InductanceSpectrum s;
  s.model = ModelKind::thin_plate;
  s.normalized = true;
  s.frequencies = {1000.0, 2000.0};
  s.delta_L = {{-0.5, -0.25}, {0.1, 0.0}};
  const std::string text = format_spectrum_csv(s, {{"plate", "foil"}});
  CHECK(text ==
        "# model: thin_plate\n# normalized: true\n# plate: foil\nfreq_hz,dL_re,dL_im\n"
        "1000,-0.5,-0.25\n2000,0.10000000000000001,0\n");
}

TEST_CASE("find") {
  const SpectrumFile f = parse_spectrum_csv("# model: thin_plate\n# normalized: true\n"
                                            "# alpha0_per_m: 166.5\nfreq_hz,dL_re,dL_im\n1,0,0\n");
  CHECK(f.find("alpha0_per_m") == std::optional<std::string>("166.5"));
  CHECK_FALSE(f.find("plate").has_value());
}

TEST_CASE("malformed input is reported with its line") {
  CHECK(error_line(with_rows("1,2\n")) == 4);
  CHECK(error_line(with_rows("1,2,3,4\n")) == 4);
  CHECK(error_line(with_rows("1,2,3\n2,x,3\n")) == 5);
  CHECK(error_line(with_rows("1,2,3\n# late: meta\n")) == 5);
  CHECK(error_line("# model: fem\n# normalized: true\nfreq_hz,dL_re,dL_im\n1,2,3\n") == 1);
  CHECK(error_line("# model: thin_plate\n# normalized: maybe\nfreq_hz,dL_re,dL_im\n1,2,3\n") == 2);
  CHECK(error_line("# model: thin_plate\n# normalized: true\nf,re,im\n1,2,3\n") == 3);
}

TEST_CASE("missing required pieces") {
  CHECK_THROWS_AS(parse_spectrum_csv(with_rows("")), InvalidInput);
  CHECK_THROWS_AS(parse_spectrum_csv("# normalized: true\nfreq_hz,dL_re,dL_im\n1,2,3\n"), InvalidInput);
  CHECK_THROWS_AS(parse_spectrum_csv("# model: thin_plate\nfreq_hz,dL_re,dL_im\n1,2,3\n"), InvalidInput);
  CHECK_THROWS_AS(parse_spectrum_csv("# model: thin_plate\n# normalized: true\n"), InvalidInput);
  CHECK_THROWS_AS(parse_spectrum_csv(with_rows("2,0,0\n1,0,0\n")), InvalidInput);
  CHECK_THROWS_AS(read_spectrum_csv("/nonexistent/spectrum.csv"), InvalidInput);
}
