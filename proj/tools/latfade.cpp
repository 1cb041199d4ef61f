#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

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

std::string num(double x) { return format_number(x); }

std::string coeff_string(const Coeffs& c) {
  std::string s = "[";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + "]";
}

std::string vector_string(const CVector& x) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    s += (i ? ", " : "") + num(x(i).real()) + (x(i).imag() < 0 ? "-" : "+") + num(std::abs(x(i).imag())) + "i";
  }
  return s + ")";
}

// Scales a lattice to unit volume together with its certificates (degree-2 forms).
LatticeFile normalized(const LatticeFile& in) {
  const double c = std::pow(in.lattice.volume(), -1.0 / (2.0 * in.lattice.k()));
  LatticeFile out{scale(in.lattice, c), in.certificates};
  for (auto& cert : out.certificates) cert.lower_bound *= c * c;
  return out;
}

std::optional<double> certificate_for(const std::vector<Certificate>& certs, const HomogeneousForm& f) {
  for (const auto& c : certs) {
    if (c.form.kind == f.kind && c.form.k == f.k && c.form.block_size == f.block_size &&
        (f.kind != FormKind::mimo_det2 || c.form.layout == f.layout)) {
      return c.lower_bound;
    }
  }
  return std::nullopt;
}

double default_radius(const Lattice& l) {
  const double shortest = std::sqrt(shortest_vector_sq(l).first);
  const double typical = std::sqrt(static_cast<double>(l.k())) * std::pow(l.volume(), 1.0 / (2.0 * l.k()));
  return 1.5 * std::max(shortest, typical);
}

MatrixGroupSpec parse_group(const std::string& name, int k, int block, const std::string& layout) {
  const Det2Layout lay = layout == "channel" ? Det2Layout::channel : Det2Layout::printed;
  if (layout != "channel" && layout != "printed") throw Error(ErrorKind::InvalidArgument, "unknown layout '" + layout + "'");
  if (name == "identity") return make_group(GroupKind::identity, k);
  if (name == "diagonal") return make_group(GroupKind::diagonal, k);
  if (name == "block") return make_group(GroupKind::block_diagonal, k, block);
  if (name == "mimo2") return make_group(GroupKind::mimo2_block, k, 1, lay);
  throw Error(ErrorKind::InvalidArgument, "unknown group '" + name + "'");
}

// ---------------------------------------------------------------- lattice

struct LatticeArgs {
  std::string gens, field, ideal, out;
  int cyclotomic = 0;
  int blockwise = 0;
  bool golden = false;
  bool normalize = false;
};

int cmd_lattice(const LatticeArgs& a) {
  const int sources = !a.gens.empty() + (a.cyclotomic > 0) + !a.field.empty() + a.golden;
  if (sources != 1) {
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --gens, --cyclotomic, --field, --golden");
  }
  LatticeFile file{Lattice(RMatrix::Identity(2, 2)), {}};
  std::string label;
  if (!a.gens.empty()) {
    try {
      file = lattice_from_json(read_json(a.gens));
    } catch (const Error& e) {
      throw Error(e.kind(), a.gens + ": " + std::string(e.what()).substr(std::string(to_string(e.kind())).size() + 2));
    }
    label = a.gens;
  } else if (a.golden) {
    const auto c = golden_code_lattice();
    file = {c.lattice, {{c.form, c.form_lower_bound}}};
    label = "golden code";
  } else {
    const NumberFieldSpec field = a.cyclotomic > 0 ? cyclotomic_field(a.cyclotomic) : field_from_file(a.field);
    label = field.label;
    if (a.blockwise > 0) {
      if (!a.ideal.empty()) throw Error(ErrorKind::InvalidArgument, "--blockwise does not take an ideal");
      const auto c = blockwise_ring(field, a.blockwise);
      file = {c.lattice, {{c.form, c.form_lower_bound}}};
    } else {
      const IdealSpec id = a.ideal.empty() ? unit_ideal(field) : ideal_from_json(read_json(a.ideal));
      // |nr(x)| is a multiple of N(I), and at least 2 N(I) in a non-principal ideal
      const double floor = static_cast<double>(id.norm) * (id.principal == false ? 2.0 : 1.0);
      file = {embed_ideal(field, id),
              {{make_form(FormKind::product_sq, field.k), field.k * std::pow(floor, 1.0 / field.k)}}};
    }
    std::cout << "field " << field.label << ": |d_K| = " << field.abs_discriminant << '\n';
  }
  if (a.normalize) file = normalized(file);
  std::cout << "lattice " << label << '\n';
  std::cout << "k = " << file.lattice.k() << '\n';
  std::cout << "volume = " << num(file.lattice.volume()) << '\n';
  if (!a.out.empty()) {
    write_json(a.out, to_json(file.lattice, file.certificates));
    std::cout << "wrote " << a.out << '\n';
  }
  return 0;
}

// ------------------------------------------------------------- invariants

struct InvariantArgs {
  std::string lattice, group = "diagonal", layout = "printed", out;
  int block = 1;
  double radius = 0.0;
  bool normalize = false;
};

int cmd_invariants(const InvariantArgs& a) {
  LatticeFile file = lattice_from_json(read_json(a.lattice));
  if (a.normalize) file = normalized(file);
  const Lattice& l = file.lattice;
  const int k = l.k();
  const double radius = a.radius > 0.0 ? a.radius : default_radius(l);
  Json report;
  report["k"] = k;
  report["volume"] = l.volume();
  report["radius"] = radius;

  const auto eucl = homogeneous_minimum(make_form(FormKind::euclidean_sq, k), l, radius);
  const double h = eucl.value / std::pow(l.volume(), 1.0 / k);
  std::cout << "hermite = " << num(h) << " (certified)\n";
  report["hermite"] = {{"value", h}, {"certified", true}};

  const auto group = parse_group(a.group, k, a.block, a.layout);
  const auto form = form_of(group);
  const auto rh = reduced_hermite_invariant(group, l, radius, certificate_for(file.certificates, form));
  std::cout << "rh[" << to_string(group.kind) << "] = " << num(rh.value)
            << (rh.certified ? " (certified)" : " (upper bound, uncertified)") << '\n';
  std::cout << "rh achiever = " << vector_string(rh.achiever.embedding) << " coeffs " << coeff_string(rh.achiever.coeffs)
            << '\n';
  report["rh"] = {{"group", to_string(group.kind)},
                  {"value", rh.value},
                  {"certified", rh.certified},
                  {"achiever_coeffs", rh.achiever.coeffs}};

  std::optional<double> product_floor;
  if (const auto c = certificate_for(file.certificates, make_form(FormKind::product_sq, k))) {
    product_floor = std::pow(*c / k, k / 2.0);
  }
  const auto nd = normalized_product_distance(l, radius, product_floor);
  std::cout << "Nd = " << num(nd.value) << (nd.certified ? " (certified)" : " (upper bound, uncertified)") << '\n';
  std::cout << "Nd achiever = " << vector_string(nd.achiever.embedding) << " coeffs " << coeff_string(nd.achiever.coeffs)
            << '\n';
  report["nd"] = {{"value", nd.value}, {"certified", nd.certified}, {"achiever_coeffs", nd.achiever.coeffs}};
  if (!a.out.empty()) write_json(a.out, report);
  return 0;
}

// ------------------------------------------------------------------ carve

struct CarveArgs {
  std::string lattice, out;
  double alpha = 1.0, power = 1.0;
  std::size_t trials = 64;
  std::uint64_t seed = 1;
};

int cmd_carve(const CarveArgs& a) {
  const LatticeFile file = normalized(lattice_from_json(read_json(a.lattice)));
  const auto search = find_shift(file.lattice, a.alpha, a.power, a.trials, a.seed);
  std::cout << "codewords = " << search.code.size() << '\n';
  std::cout << "rate_bits = " << num(search.code.size() ? rate(search.code) : 0.0) << '\n';
  std::cout << "guarantee = " << num(search.guarantee) << '\n';
  std::cout << "guarantee_met = " << (search.guarantee_met ? "true" : "false") << '\n';
  std::cout << "best_trial = " << search.best_trial << '\n';
  if (!a.out.empty()) {
    Json j = to_json(search.code);
    j["lattice"] = to_json(file.lattice, file.certificates);
    write_json(a.out, j);
    std::cout << "wrote " << a.out << '\n';
  }
  return 0;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string codebook, model = "awgn", model_file, out;
  int block = 1;
  bool iid_blocks = false;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double epsilon = 0.5;
  std::size_t capacity_samples = 1'000'000;
  bool allow_upper_bound = false;
  bool append = false;
};

int cmd_simulate(const SimulateArgs& a) {
  const Json cj = read_json(a.codebook);
  const FiniteCode code = codebook_from_json(cj);
  const std::vector<Certificate> certs =
      cj.contains("lattice") ? lattice_from_json(cj.at("lattice")).certificates : std::vector<Certificate>{};
  const ChannelModel model = a.model_file.empty()
                                 ? make_channel(channel_kind_from_string(a.model), code.k(), a.block, a.iid_blocks)
                                 : model_from_json(read_json(a.model_file));
  if (model.k != code.k()) {
    throw Error(ErrorKind::DimensionMismatch,
                "codebook k=" + std::to_string(code.k()) + " but model k=" + std::to_string(model.k));
  }

  // rh of the unit-volume base for the model's group
  std::optional<double> rh;
  double rh_value = 0.0;
  bool certified = false;
  try {
    const auto group = group_of(model);
    const auto form = form_of(group);
    const auto bound = certificate_for(certs, form);
    const auto m = reduced_hermite_invariant(group, code.base, default_radius(code.base), bound);
    rh_value = m.value;
    certified = m.certified;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsupportedGroup && e.kind() != ErrorKind::EmptySearch) throw;
  }
  if (certified) rh = rh_value;
  if (!certified && !a.allow_upper_bound) {
    throw Error(ErrorKind::UncertifiedInvariant,
                "no certified rh for the code lattice under the " + to_string(model.kind) +
                    " group; pass --allow-upper-bound to report anyway");
  }

  ExperimentConfig cfg{code, model, a.trials, a.seed, a.epsilon, rh};
  const Aggregate agg = run_experiment(cfg);
  const double c = rh_value / (2.0 * model.k);
  GapOptions opt;
  opt.allow_upper_bound = a.allow_upper_bound;
  opt.capacity_samples = a.capacity_samples;
  opt.seed = derive_seed(a.seed, 0xcafeULL);
  const double c_used = c > 0.0 ? c : 1.0 / kPiE;
  const GapReport gap = gap_report(code, model, agg.mu_hat, c_used, certified, opt);

  Json config{{"codebook", cj},
              {"model", to_json(model)},
              {"trials", a.trials},
              {"seed", a.seed},
              {"epsilon", a.epsilon},
              {"capacity_samples", a.capacity_samples}};
  ResultRow row;
  row.config_hash = hex64(fnv1a64(canonical_json(config)));
  row.k = model.k;
  row.power = code.power;
  row.alpha = code.alpha;
  row.model = to_string(model.kind) + (model.kind == ChannelKind::block_fading_diag ? std::to_string(model.block) : "");
  row.trials = agg.trials;
  row.error_rate = agg.error_rate;
  row.ci_lo = agg.ci_lo;
  row.ci_hi = agg.ci_hi;
  row.rate_bits = gap.rate_bits;
  row.threshold_bits = gap.threshold_bits;
  row.capacity_bits = gap.capacity_bits;
  row.gap_bits = gap.gap_bits;
  row.mu_hat = agg.mu_hat;
  row.violations = agg.bound_violations;
  row.rh_certified = certified;

  std::cout << "error_rate = " << num(agg.error_rate) << " [" << num(agg.ci_lo) << ", " << num(agg.ci_hi) << "]\n";
  std::cout << "rh = " << num(rh_value) << (certified ? " (certified)" : " (upper bound, uncertified)") << '\n';
  std::cout << "violations = " << agg.bound_violations << '\n';
  if (!a.out.empty()) {
    const bool header = !a.append || !std::filesystem::exists(a.out) || std::filesystem::file_size(a.out) == 0;
    std::ofstream out(a.out, a.append ? std::ios::app : std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, a.out + ": cannot open for writing");
    if (header) out << csv_header() << '\n';
    out << csv_line(row) << '\n';
    std::cout << "wrote " << a.out << '\n';
  }
  return agg.bound_violations == 0 ? 0 : 4;
}

// ----------------------------------------------------------------- report

struct ReportArgs {
  std::vector<std::string> csv;
  std::string plot_data;
  double martinet = 0.0;
  int k = 0;
  double power = 0.0, c = 0.0;
  bool allow_upper_bound = false;
};

int cmd_report(const ReportArgs& a) {
  if (a.martinet > 0.0) {
    std::cout << "constant gap log2(2G/(pi e)) at G = " << num(a.martinet) << ": "
              << format_number(std::round(constant_gap_bits(a.martinet) * 1e6) / 1e6) << " bits\n";
    if (a.k > 0) {
      const auto v = martinet_report(a.martinet, a.k);
      std::cout << "virtual field (non-constructive), k = " << a.k << ": rh = " << num(v.rh)
                << ", Nd = " << num(v.nd_pmin) << '\n';
    }
  }
  if (a.power > 0.0) {
    const double c = a.c > 0.0 ? a.c : 1.0 / kPiE;
    std::cout << "awgn threshold at P = " << num(a.power) << ", c = " << num(c) << ": "
              << num(awgn_threshold_bits(a.power, c)) << " bits (log2 P - " << num(std::log2(a.power) - awgn_threshold_bits(a.power, c))
              << ")\n";
  }
  std::vector<ResultRow> rows;
  for (const auto& path : a.csv) {
    const auto r = read_csv(path);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (rows.empty()) return 0;
  bool uncertified = false;
  for (const auto& r : rows) uncertified |= !r.rh_certified;
  if (uncertified && !a.allow_upper_bound) {
    throw Error(ErrorKind::UncertifiedInvariant,
                "some rows rest on an uncertified rh; pass --allow-upper-bound to print them");
  }
  if (uncertified) std::cout << "WARNING: rows marked * use an upper bound on rh; their thresholds are not guarantees\n";
  std::printf("%-16s %-9s %3s %8s %8s %9s %9s %9s %9s %9s %11s %3s\n", "config", "model", "k", "P", "alpha", "rate",
              "threshold", "capacity", "gap", "mu_hat", "error_rate", "vio");
  for (const auto& r : rows) {
    std::printf("%-16s %-9s %3d %8.4g %8.4g %9.4f %9.4f %9.4f %9.4f %9.4f %11.4g %3zu%s\n", r.config_hash.c_str(),
                r.model.c_str(), r.k, r.power, r.alpha, r.rate_bits, r.threshold_bits, r.capacity_bits, r.gap_bits,
                r.mu_hat, r.error_rate, r.violations, r.rh_certified ? "" : " *");
  }
  if (!a.plot_data.empty()) {
    std::ofstream out(a.plot_data);
    if (!out) throw Error(ErrorKind::InvalidArgument, a.plot_data + ": cannot open for writing");
    out << "config_hash,model,k,P,alpha,rate_bits,threshold_bits,rate_minus_threshold,error_rate,ci_lo,ci_hi\n";
    for (const auto& r : rows) {
      out << r.config_hash << ',' << r.model << ',' << r.k << ',' << num(r.power) << ',' << num(r.alpha) << ','
          << num(r.rate_bits) << ',' << num(r.threshold_bits) << ',' << num(r.rate_bits - r.threshold_bits) << ','
          << num(r.error_rate) << ',' << num(r.ci_lo) << ',' << num(r.ci_hi) << '\n';
    }
    std::cout << "wrote " << a.plot_data << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{"latfade: lattice codes for fading channels"};
  app.require_subcommand(1);

  LatticeArgs la;
  auto* lat = app.add_subcommand("lattice", "Build a lattice and write it as JSON");
  lat->add_option("--gens", la.gens, "Lattice JSON with generators");
  lat->add_option("--cyclotomic", la.cyclotomic, "Ring of integers of Q(zeta_n)");
  lat->add_option("--field", la.field, "Field JSON");
  lat->add_option("--ideal", la.ideal, "Ideal JSON (with --field or --cyclotomic)");
  lat->add_option("--blockwise", la.blockwise, "Block-interleaved ring for block length b");
  lat->add_flag("--golden", la.golden, "Golden-code lattice in C^4");
  lat->add_flag("--normalize", la.normalize, "Scale to unit volume");
  lat->add_option("-o,--output", la.out, "Output lattice JSON");

  InvariantArgs ia;
  auto* inv = app.add_subcommand("invariants", "Hermite, reduced Hermite and product-distance invariants");
  inv->add_option("--lattice", ia.lattice, "Lattice JSON")->required();
  inv->add_option("--group", ia.group, "identity | diagonal | block | mimo2");
  inv->add_option("--block", ia.block, "Block repeat length for --group block");
  inv->add_option("--layout", ia.layout, "printed | channel (mimo2)");
  inv->add_option("--radius", ia.radius, "Search radius");
  inv->add_flag("--normalize", ia.normalize, "Scale to unit volume first");
  inv->add_option("-o,--output", ia.out, "Report JSON");

  CarveArgs ca;
  auto* carve_cmd = app.add_subcommand("carve", "Carve a finite code from a lattice");
  carve_cmd->add_option("--lattice", ca.lattice, "Lattice JSON")->required();
  carve_cmd->add_option("--alpha", ca.alpha, "Scaling alpha > 0")->required();
  carve_cmd->add_option("--P", ca.power, "Power P > 0")->required();
  carve_cmd->add_option("--trials", ca.trials, "Random shift trials");
  carve_cmd->add_option("--seed", ca.seed, "Seed");
  carve_cmd->add_option("-o,--output", ca.out, "Codebook JSON");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo transmission over a fading channel");
  sim->add_option("--codebook", sa.codebook, "Codebook JSON")->required();
  sim->add_option("--model", sa.model, "awgn | rayleigh | block | mimo2");
  sim->add_option("--model-file", sa.model_file, "Model JSON");
  sim->add_option("--block", sa.block, "Coherence length for block fading");
  sim->add_flag("--iid-blocks", sa.iid_blocks, "Fresh 2x2 matrix per frame (mimo2)");
  sim->add_option("--trials", sa.trials, "Trials");
  sim->add_option("--seed", sa.seed, "Seed");
  sim->add_option("--epsilon", sa.epsilon, "Concentration slack");
  sim->add_option("--capacity-samples", sa.capacity_samples, "Monte Carlo samples for capacity");
  sim->add_flag("--allow-upper-bound", sa.allow_upper_bound, "Report with an uncertified rh");
  sim->add_flag("--append", sa.append, "Append to the CSV");
  sim->add_option("-o,--output", sa.out, "Results CSV");

  ReportArgs ra;
  auto* rep = app.add_subcommand("report", "Gap table from result CSVs");
  rep->add_option("--csv", ra.csv, "Result CSV files");
  rep->add_option("--plot-data", ra.plot_data, "Plot-ready CSV output");
  rep->add_option("--martinet", ra.martinet, "Root-discriminant constant G");
  rep->add_option("--k", ra.k, "Dimension for the virtual-field line");
  rep->add_option("--P", ra.power, "Print the awgn threshold at this power");
  rep->add_option("--c", ra.c, "c for the threshold line (default 1/(pi e))");
  rep->add_flag("--allow-upper-bound", ra.allow_upper_bound, "Print rows with an uncertified rh");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*lat) return cmd_lattice(la);
    if (*inv) return cmd_invariants(ia);
    if (*carve_cmd) return cmd_carve(ca);
    if (*sim) return cmd_simulate(sa);
    if (*rep) return cmd_report(ra);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::EmptySearch) std::cerr << "hint: increase --radius\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
