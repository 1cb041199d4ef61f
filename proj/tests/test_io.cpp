#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "latfade/error.hpp"
#include "latfade/io.hpp"
#include "latfade/parallel.hpp"
#include "oracles.hpp"

using namespace latfade;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("lattice JSON round trip") {
  const auto c = golden_code_lattice();
  const Json j = to_json(c.lattice, {{c.form, c.form_lower_bound}});
  const auto back = lattice_from_json(Json::parse(j.dump()));
  CHECK((back.lattice.generators() - c.lattice.generators()).norm() < 1e-12);
  REQUIRE(back.certificates.size() == 1);
  CHECK(back.certificates[0].form.kind == FormKind::mimo_det2);
  CHECK(back.certificates[0].form.layout == Det2Layout::channel);
  CHECK(back.certificates[0].lower_bound == 2.0);
}

TEST_CASE("lattice JSON validation") {
  CHECK(kind_of([] { lattice_from_json(Json::parse(R"({"k":1,"generators":[[1,0],[2,0]]})")); }) ==
        ErrorKind::RankDeficient);
  CHECK(kind_of([] { lattice_from_json(Json::parse(R"({"k":1,"generators":[[1,0]]})")); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { lattice_from_json(Json::parse(R"({"generators":[[1,0],[0,1]]})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { lattice_from_json(Json::parse(R"({"k":1,"generators":[[1,0],[0,"x"]]})")); }) ==
        ErrorKind::Parse);
}

TEST_CASE("form and model descriptors") {
  const auto f = form_from_json(Json::parse(R"({"kind":"block_product_sq","k":4,"block_size":2})"));
  CHECK(f.kind == FormKind::block_product_sq);
  CHECK(f.block_size == 2);
  CHECK(form_from_json(to_json(f)).block_size == 2);
  CHECK(kind_of([] { form_from_json(Json::parse(R"({"kind":"cubic","k":4})")); }) == ErrorKind::Parse);

  const auto m = model_from_json(Json::parse(R"({"kind":"block","k":4,"block":2,"law":"rayleigh"})"));
  CHECK(m.kind == ChannelKind::block_fading_diag);
  CHECK(m.block == 2);
  const auto mm = model_from_json(to_json(make_channel(ChannelKind::mimo2_block, 8, 1, true)));
  CHECK(mm.iid_blocks);
  CHECK(kind_of([] { model_from_json(Json::parse(R"({"kind":"rayleigh","k":2,"law":"rician"})")); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([] { model_from_json(Json::parse(R"({"kind":"block","k":3,"block":2})")); }) ==
        ErrorKind::BlockMismatch);
}

TEST_CASE("ideal and codebook round trip") {
  IdealSpec id;
  id.coeffs = IMatrix{{2, 0}, {1, 1}};
  id.norm = 2;
  id.principal = false;
  const auto back = ideal_from_json(Json::parse(to_json(id).dump()));
  CHECK(back.coeffs == id.coeffs);
  CHECK(back.norm == 2);
  CHECK(back.principal == std::optional<bool>(false));

  const auto code = find_shift(oracle::gaussian_integers(2), 0.9, 2.0, 4, 3).code;
  const auto cb = codebook_from_json(Json::parse(to_json(code).dump()));
  CHECK(cb.size() == code.size());
  CHECK(cb.alpha == code.alpha);
  CHECK(cb.power == code.power);
  CHECK((cb.shift - code.shift).norm() == 0.0);
  for (std::size_t i = 0; i < cb.size(); ++i) CHECK((cb.codewords[i] - code.codewords[i]).norm() == 0.0);
  CHECK(cb.rate_bits == doctest::Approx(code.rate_bits));
}

TEST_CASE("canonical JSON and hashing") {
  const Json j = Json::parse(R"({"b":[1,2.5,0.1],"a":{"z":true,"y":"s"},"c":3.14159265358979})");
  CHECK(canonical_json(j) == R"({"a":{"y":"s","z":true},"b":[1,2.5,0.1],"c":3.14159265359})");
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  CHECK(format_number(0.1 + 0.2) == "0.3");
}

TEST_CASE("results CSV round trip") {
  ResultRow r;
  r.config_hash = "00000000deadbeef";
  r.k = 2;
  r.power = 16;
  r.alpha = 0.75;
  r.model = "rayleigh";
  r.trials = 100000;
  r.error_rate = 0.01234;
  r.ci_lo = 0.0117;
  r.ci_hi = 0.013;
  r.rate_bits = 2.1;
  r.threshold_bits = 3.26;
  r.capacity_bits = 3.4;
  r.gap_bits = 0.14;
  r.mu_hat = -0.83;
  r.violations = 0;
  r.rh_certified = true;
  const std::string path = "io_results.csv";
  std::ofstream(path) << csv_header() << '\n' << csv_line(r) << '\n';
  const auto rows = read_csv(path);
  REQUIRE(rows.size() == 1);
  CHECK(csv_line(rows[0]) == csv_line(r));
  std::ofstream(path) << "bad,header\n";
  CHECK(kind_of([&] { read_csv(path); }) == ErrorKind::Parse);
  std::remove(path.c_str());
}

TEST_CASE("thread cap") {
  CHECK(apply_thread_cap() >= 1);
}
