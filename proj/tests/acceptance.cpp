// Acceptance checks: one PASS/FAIL line per criterion, with wall time.

#include <omp.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latfade/channels.hpp"
#include "latfade/codebook.hpp"
#include "latfade/error.hpp"
#include "latfade/forms.hpp"
#include "latfade/io.hpp"
#include "latfade/numfield.hpp"
#include "latfade/parallel.hpp"
#include "latfade/sim.hpp"

using namespace latfade;

namespace {

const double kPiE = std::acos(-1.0) * std::exp(1.0);
const double kEulerGamma = 0.57721566490153286;
const std::vector<int> kConductors{3, 4, 5, 7, 8, 9, 11, 12, 15, 16};

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

long long conductor_discriminant(int n) {
  int phi = 0;
  for (int a = 1; a <= n; ++a) phi += std::gcd(a, n) == 1 ? 1 : 0;
  long double d = std::pow(static_cast<long double>(n), phi);
  int m = n;
  for (int p = 2; p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    d /= std::pow(static_cast<long double>(p), static_cast<long double>(phi) / (p - 1));
  }
  return std::llround(d);
}

// ------------------------------------------------------------------------ 1

Outcome volume_identities() {
  Outcome o;
  double worst = 0.0;
  for (int n : kConductors) {
    const auto field = cyclotomic_field(n);
    const long long d = conductor_discriminant(n);
    if (field.abs_discriminant != d) {
      o.pass = false;
      o.detail += " n=" + std::to_string(n) + ": |d_K| " + std::to_string(field.abs_discriminant) +
                  " != " + std::to_string(d) + ";";
    }
    const double expected = std::ldexp(1.0, -field.k) * std::sqrt(static_cast<double>(d));
    const double err = rel(embed_ring(field).volume(), expected);
    worst = std::max(worst, err);
    if (err > 1e-8) o.pass = false;
  }
  o.detail += " 10 fields, worst relative volume error " + fmt(worst);
  return o;
}

// ------------------------------------------------------------------------ 2

Outcome certified_invariants() {
  Outcome o;
  double worst = 0.0;
  int certified = 0;
  for (int n : kConductors) {
    const auto field = cyclotomic_field(n);
    const int k = field.k;
    const double d = static_cast<double>(conductor_discriminant(n));
    const Lattice ring = embed_ring(field);
    const double radius = std::sqrt(static_cast<double>(k)) * 1.01;
    const auto rh = reduced_hermite_invariant(make_group(GroupKind::diagonal, k), ring, radius, k);
    const auto nd = normalized_product_distance(ring, radius, 1.0);
    const double rh_formula = 2.0 * k / std::pow(d, 1.0 / (2.0 * k));
    const double nd_formula = std::pow(2.0, k / 2.0) / std::pow(d, 0.25);
    const double err = std::max(rel(rh.value, rh_formula), rel(nd.value, nd_formula));
    worst = std::max(worst, err);
    if (rh.certified && nd.certified) ++certified;
    if (err > 1e-8 || !rh.certified || !nd.certified) o.pass = false;
    if (n == 8 && (rel(rh.value, 1.0) > 1e-8 || rel(nd.value, 0.5) > 1e-8)) o.pass = false;
  }
  o.detail = " " + std::to_string(certified) + "/10 certified, worst relative error " + fmt(worst);
  return o;
}

// ------------------------------------------------------------------------ 3

Outcome oracle_equivalence() {
  Outcome o;
  std::vector<MatrixGroupSpec> groups;
  for (int k : {2, 4, 6}) {
    groups.push_back(make_group(GroupKind::diagonal, k));
    groups.push_back(make_group(GroupKind::block_diagonal, k, 2));
  }
  groups.push_back(make_group(GroupKind::block_diagonal, 6, 3));
  groups.push_back(make_group(GroupKind::mimo2_block, 4));
  groups.push_back(make_group(GroupKind::mimo2_block, 4, 1, Det2Layout::channel));
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (const auto& g : groups) {
    for (int t = 0; t < 100; ++t) {
      CVector x(g.k);
      for (int i = 0; i < g.k; ++i) x(i) = Complex(normal(rng), normal(rng));
      const double closed = reduced_norm_sq_closed_form(g, x);
      const double numeric = reduced_norm_sq_numeric(g, x, 200);
      const double err = rel(numeric, closed);
      worst = std::max(worst, err);
      if (err > 1e-4) o.pass = false;
    }
  }
  o.detail = " " + std::to_string(groups.size()) + " groups x 100 vectors, worst relative gap " + fmt(worst);
  return o;
}

// ------------------------------------------------------------------------ 4

Outcome carving_guarantee() {
  Outcome o;
  for (int k : {1, 2, 3}) {
    const Lattice zk(RMatrix::Identity(2 * k, 2 * k));
    for (const auto& [alpha, power] : {std::pair{1.0, 2.0}, std::pair{0.8, 1.0}}) {
      int met = 0;
      for (std::uint64_t run = 0; run < 100; ++run) {
        met += find_shift(zk, alpha, power, 64, derive_seed(0xca7e, run * 7 + k)).guarantee_met ? 1 : 0;
      }
      o.detail += " k=" + std::to_string(k) + ",alpha=" + fmt(alpha) + ",P=" + fmt(power) + ": " +
                  std::to_string(met) + "/100;";
      if (met < 95) o.pass = false;
    }
  }
  return o;
}

// ------------------------------------------------------------------------ 5

struct ModelCase {
  std::string name;
  ChannelModel model;
  CertifiedLattice lattice;
  double alpha;
  double power;
};

Outcome distance_inequality() {
  Outcome o;
  const auto q8 = cyclotomic_field(8);
  std::vector<ModelCase> cases;
  {
    const auto ring = certified_ring(q8);
    cases.push_back({"awgn", make_channel(ChannelKind::awgn, 2),
                     {ring.lattice, make_form(FormKind::euclidean_sq, 2), 0.0}, 0.75, 1.0});
    cases.push_back({"rayleigh", make_channel(ChannelKind::iid_rayleigh_diag, 2), ring, 0.75, 1.0});
  }
  cases.push_back({"block-2", make_channel(ChannelKind::block_fading_diag, 4, 2), blockwise_ring(q8, 2), 1.4, 1.0});
  cases.push_back({"mimo2", make_channel(ChannelKind::mimo2_block, 4), golden_code_lattice(), 1.4, 1.0});

  for (const auto& c : cases) {
    const Lattice base = normalize_volume(c.lattice.lattice);
    const double s2 = std::pow(c.lattice.lattice.volume(), -1.0 / c.lattice.lattice.k());
    const auto group = group_of(c.model);
    std::optional<double> bound;
    if (c.lattice.form.kind != FormKind::euclidean_sq) bound = c.lattice.form_lower_bound * s2;
    const auto rh = reduced_hermite_invariant(group, base, 3.0, bound);
    if (!rh.certified) {
      o.pass = false;
      o.detail += " " + c.name + ": rh not certified;";
      continue;
    }
    const auto code = find_shift(base, c.alpha, c.power, 8, 5).code;

    ExperimentConfig cfg{code, c.model, 10000, 77};
    cfg.rh = rh.value;
    const auto agg = run_experiment(cfg);

    // every codeword pair, on an independent set of 10^4 draws
    std::vector<CVector> diffs;
    for (std::size_t i = 0; i < code.size(); ++i) {
      for (std::size_t j = i + 1; j < code.size(); ++j) diffs.push_back(code.codewords[i] - code.codewords[j]);
    }
    std::vector<std::size_t> pair_violations(10000, 0);
#pragma omp parallel for schedule(static)
    for (std::size_t t = 0; t < 10000; ++t) {
      const auto draw = sample_channel(c.model, derive_seed(991, t));
      double dmin = INFINITY;
      for (const auto& d : diffs) dmin = std::min(dmin, apply_channel(draw, d).squaredNorm());
      const double floor = c.alpha * c.alpha * draw.det_term() * rh.value;
      pair_violations[t] = dmin < floor - 1e-6 ? 1 : 0;
    }
    const std::size_t pv = std::accumulate(pair_violations.begin(), pair_violations.end(), std::size_t{0});
    o.detail += " " + c.name + ": |C|=" + std::to_string(code.size()) + ", rh=" + fmt(rh.value) +
                ", violations " + std::to_string(agg.bound_violations) + "+" + std::to_string(pv) + ";";
    if (agg.bound_violations != 0 || pv != 0) o.pass = false;
  }
  return o;
}

// ------------------------------------------------------------------------ 6

Outcome mu_estimation() {
  Outcome o;
  const double mu = -kEulerGamma / std::log(2.0);
  const auto ray = estimate_mu(make_channel(ChannelKind::iid_rayleigh_diag, 1), 1'000'000, 6);
  const auto awgn = estimate_mu(make_channel(ChannelKind::awgn, 4), 1000, 6);
  const double z = std::abs(ray.mu - mu) / ray.std_error;
  o.pass = z <= 3.0 && awgn.mu == 0.0;
  o.detail = " rayleigh mu_hat=" + fmt(ray.mu) + " (stderr " + fmt(ray.std_error) + ", |z|=" + fmt(z) +
             "), awgn mu=" + fmt(awgn.mu);
  return o;
}

// ------------------------------------------------------------------------ 7

std::string cli_path() { return LATFADE_CLI_PATH; }

std::string run_capture(const std::string& cmd) {
  std::string out;
  if (FILE* p = popen(cmd.c_str(), "r")) {
    char buf[512];
    while (std::fgets(buf, sizeof buf, p)) out += buf;
    pclose(p);
  }
  return out;
}

Outcome gap_constants() {
  Outcome o;
  const double gap = constant_gap_bits(kMartinetG);
  const std::string text = run_capture(cli_path() + " report --martinet 92.368 --P 16");
  double printed = NAN;
  const auto pos = text.find("92.368: ");
  if (pos != std::string::npos) printed = std::stod(text.substr(pos + 8));
  double worst_threshold = 0.0;
  for (double p : {1.0, 2.0, 16.0, 100.0, 1e4}) {
    worst_threshold = std::max(worst_threshold, std::abs(awgn_threshold_bits(p, 1.0 / kPiE) - (std::log2(p) - 1.0)));
  }
  const bool threshold_line = text.find("3 bits (log2 P - 1)") != std::string::npos;
  o.pass = std::abs(gap - 4.435) <= 1e-3 && std::abs(printed - 4.435) <= 1e-3 && worst_threshold <= 1e-12 &&
           threshold_line;
  o.detail = " gap=" + fmt(gap) + " bits, report printed " + fmt(printed) + ", threshold offset error " +
             fmt(worst_threshold) + (threshold_line ? "" : ", threshold line missing");
  return o;
}

// ------------------------------------------------------------------------ 8

Outcome finite_k_errors() {
  Outcome o;
  const int k = 2;
  const double power = 16.0;
  const double c = 0.25;  // rh / (2k) with rh = 1 certified
  const auto model = make_channel(ChannelKind::iid_rayleigh_diag, k);
  const Lattice base = normalize_volume(embed_ring(cyclotomic_field(8)));
  const auto rh = reduced_hermite_invariant(group_of(model), base, 2.0, 1.0);
  if (!rh.certified || rel(rh.value, 1.0) > 1e-9) return {false, " rh of the normalized ring is not certified as 1"};

  const double mu = estimate_mu(model, 1'000'000, 8).mu;
  const double threshold = fading_threshold_bits(power, mu, c);
  auto alpha_for = [&](double target_rate) {
    return std::pow(ball_volume_constant(k) * std::pow(power, k) * std::exp2(-k * target_rate), 1.0 / (2.0 * k));
  };
  const double a_below = alpha_for(threshold - 1.0);
  const double a_above = alpha_for(threshold + 1.0);
  const double a_mid = std::sqrt(a_below * a_above);

  struct Run {
    double alpha, rate, err, lo, hi;
  };
  std::vector<Run> runs;
  for (double alpha : {a_above, a_mid, a_below}) {
    const auto code = find_shift(base, alpha, power, 16, 21).code;
    ExperimentConfig cfg{code, model, 100000, 88};
    cfg.rh = rh.value;
    const auto agg = run_experiment(cfg);
    runs.push_back({alpha, rate(code), agg.error_rate, agg.ci_lo, agg.ci_hi});
    if (agg.bound_violations) o.pass = false;
  }
  const Run& above = runs.front();
  const Run& below = runs.back();
  if (std::abs(below.rate - (threshold - 1.0)) > 0.25 || std::abs(above.rate - (threshold + 1.0)) > 0.25) o.pass = false;
  if (!(below.hi < above.lo)) o.pass = false;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].err > runs[i - 1].hi) o.pass = false;
  }
  o.detail = " threshold=" + fmt(threshold) + " bits;";
  for (const auto& r : runs) {
    o.detail += " alpha=" + fmt(r.alpha) + " rate=" + fmt(r.rate) + " err=" + fmt(r.err) + " [" + fmt(r.lo) + "," +
                fmt(r.hi) + "];";
  }
  return o;
}

// ------------------------------------------------------------------------ 9

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool pipeline(const std::filesystem::path& dir, int threads) {
  std::filesystem::create_directories(dir);
  const std::string env = "LATFADE_THREADS=" + std::to_string(threads) + " ";
  const std::string cli = env + cli_path();
  const std::string d = dir.string() + "/";
  const std::vector<std::string> steps{
      cli + " lattice --cyclotomic 8 -o " + d + "zeta8.json",
      cli + " lattice --cyclotomic 8 --blockwise 2 -o " + d + "block.json",
      cli + " carve --lattice " + d + "zeta8.json --alpha 1.0 --P 4 --trials 32 --seed 3 -o " + d + "code2.json",
      cli + " carve --lattice " + d + "block.json --alpha 1.8 --P 2 --trials 32 --seed 3 -o " + d + "code4.json",
      cli + " simulate --codebook " + d + "code2.json --model rayleigh --trials 10000 --seed 7 " +
          "--capacity-samples 100000 -o " + d + "results.csv",
      cli + " simulate --codebook " + d + "code2.json --model awgn --trials 10000 --seed 7 " +
          "--capacity-samples 100000 --append -o " + d + "results.csv",
      cli + " simulate --codebook " + d + "code4.json --model block --block 2 --trials 10000 --seed 7 " +
          "--capacity-samples 100000 --append -o " + d + "results.csv",
      cli + " report --csv " + d + "results.csv --plot-data " + d + "plot.csv",
  };
  for (const auto& s : steps) {
    if (std::system((s + " > /dev/null 2>&1").c_str()) != 0) return false;
  }
  return true;
}

Outcome determinism() {
  Outcome o;
  const auto root = std::filesystem::temp_directory_path() / ("latfade_acceptance_" + std::to_string(::getpid()));
  const bool ok1 = pipeline(root / "a", 1);
  const bool ok2 = pipeline(root / "b", 4);
  if (!ok1 || !ok2) {
    std::filesystem::remove_all(root);
    return {false, " pipeline command failed"};
  }
  std::size_t bytes = 0;
  for (const char* f : {"code2.json", "code4.json", "results.csv", "plot.csv"}) {
    const std::string a = slurp(root / "a" / f);
    const std::string b = slurp(root / "b" / f);
    bytes += a.size();
    if (a.empty() || a != b) {
      o.pass = false;
      o.detail += std::string(" ") + f + " differs;";
    }
  }
  // in-process: the same experiment under 1 and 3 OpenMP threads
  const auto code = carve(normalize_volume(embed_ring(cyclotomic_field(8))), 1.0, 4.0, CVector::Zero(2));
  ExperimentConfig cfg{code, make_channel(ChannelKind::iid_rayleigh_diag, 2), 20000, 12};
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = run_experiment(cfg);
  omp_set_num_threads(3);
  const auto three = run_experiment(cfg);
  omp_set_num_threads(saved);
  if (one.errors != three.errors || one.mu_hat != three.mu_hat || one.min_dh_sq != three.min_dh_sq) {
    o.pass = false;
    o.detail += " in-process aggregates differ;";
  }
  o.detail += " 4 artifacts (" + std::to_string(bytes) + " bytes) identical under 1 and 4 threads";
  std::filesystem::remove_all(root);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<Criterion> criteria{
      {1, "volume identities for cyclotomic rings", 5.0, volume_identities},
      {2, "certified rh and Nd by enumeration", 30.0, certified_invariants},
      {3, "closed-form vs numeric reduced norms", 60.0, oracle_equivalence},
      {4, "carving cardinality guarantee", 60.0, carving_guarantee},
      {5, "faded distance inequality", 300.0, distance_inequality},
      {6, "mu estimation", 30.0, mu_estimation},
      {7, "gap constants", 10.0, gap_constants},
      {8, "finite-k error behaviour around the threshold", 600.0, finite_k_errors},
      {9, "end-to-end determinism", 120.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string(" exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail += " over the " + fmt(c.limit_seconds) + " s limit;";
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s [%d] %s (%.2f s):%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
