#include "latfade/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "latfade/error.hpp"

namespace latfade {
namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* key) {
  try {
    return member(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("field '") + key + "': " + e.what());
  }
}

Json complex_row(const CVector& x) {
  Json row = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    row.push_back(x(i).real());
    row.push_back(x(i).imag());
  }
  return row;
}

CVector complex_from_row(const Json& row, int k, const std::string& where) {
  if (!row.is_array() || static_cast<int>(row.size()) != 2 * k) {
    parse_error(where + ": expected " + std::to_string(2 * k) + " numbers");
  }
  CVector x(k);
  for (int i = 0; i < k; ++i) {
    if (!row[2 * i].is_number() || !row[2 * i + 1].is_number()) parse_error(where + ": not a number");
    x(i) = Complex(row[2 * i].get<double>(), row[2 * i + 1].get<double>());
  }
  return x;
}

void write_canonical(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // std::map keeps keys sorted
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        write_canonical(value, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write_canonical(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

Json to_json(const Lattice& lattice, const std::vector<Certificate>& certificates) {
  Json j;
  j["k"] = lattice.k();
  j["generators"] = Json::array();
  for (int i = 0; i < lattice.rank(); ++i) j["generators"].push_back(complex_row(lattice.generator(i)));
  if (!certificates.empty()) {
    j["certificates"] = Json::array();
    for (const auto& c : certificates) {
      j["certificates"].push_back({{"form", to_json(c.form)}, {"lower_bound", c.lower_bound}});
    }
  }
  return j;
}

LatticeFile lattice_from_json(const Json& j) {
  const int k = get_as<int>(j, "k");
  if (k < 1) parse_error("field 'k' must be positive");
  const Json& gens = member(j, "generators");
  if (!gens.is_array() || static_cast<int>(gens.size()) != 2 * k) {
    throw Error(ErrorKind::DimensionMismatch,
                "field 'generators': expected " + std::to_string(2 * k) + " rows for k=" + std::to_string(k));
  }
  RMatrix rows(2 * k, 2 * k);
  for (int i = 0; i < 2 * k; ++i) {
    const std::string where = "generators[" + std::to_string(i) + "]";
    rows.row(i) = to_real(complex_from_row(gens[i], k, where)).transpose();
  }
  LatticeFile file{Lattice(rows), {}};
  if (j.contains("certificates")) {
    for (const auto& c : j.at("certificates")) {
      Certificate cert{form_from_json(member(c, "form")), get_as<double>(c, "lower_bound")};
      if (cert.form.k != k) throw Error(ErrorKind::DimensionMismatch, "certificate form k differs from lattice k");
      file.certificates.push_back(cert);
    }
  }
  return file;
}

FormKind form_kind_from_string(const std::string& s) {
  for (FormKind kind : {FormKind::euclidean_sq, FormKind::product_sq, FormKind::block_product_sq,
                        FormKind::mimo_det2}) {
    if (to_string(kind) == s) return kind;
  }
  throw Error(ErrorKind::Parse, "unknown form kind '" + s + "'");
}

Json to_json(const HomogeneousForm& form) {
  Json j{{"kind", to_string(form.kind)}, {"k", form.k}};
  if (form.kind == FormKind::block_product_sq) j["block_size"] = form.block_size;
  if (form.kind == FormKind::mimo_det2) j["layout"] = to_string(form.layout);
  return j;
}

HomogeneousForm form_from_json(const Json& j) {
  const FormKind kind = form_kind_from_string(get_as<std::string>(j, "kind"));
  const int k = get_as<int>(j, "k");
  const int block = j.contains("block_size") ? get_as<int>(j, "block_size") : 1;
  Det2Layout layout = Det2Layout::printed;
  if (j.contains("layout")) {
    const auto s = get_as<std::string>(j, "layout");
    if (s == "channel") {
      layout = Det2Layout::channel;
    } else if (s != "printed") {
      parse_error("field 'layout': unknown value '" + s + "'");
    }
  }
  return make_form(kind, k, block, layout);
}

Json to_json(const NumberFieldSpec& field) {
  Json j;
  j["label"] = field.label;
  j["degree"] = field.degree();
  j["abs_discriminant"] = field.abs_discriminant;
  if (field.n_min) j["n_min"] = *field.n_min;
  j["embeddings"] = Json::array();
  for (Eigen::Index i = 0; i < field.embeddings.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < field.embeddings.cols(); ++c) {
      const LComplex z = field.embeddings(i, c);
      row.push_back({static_cast<double>(z.real()), static_cast<double>(z.imag())});
    }
    j["embeddings"].push_back(row);
  }
  return j;
}

NumberFieldSpec field_from_json(const Json& j) {
  const std::string label = j.contains("label") ? get_as<std::string>(j, "label") : "K";
  const int degree = get_as<int>(j, "degree");
  if (degree < 2 || degree % 2 != 0) {
    throw Error(ErrorKind::NotTotallyComplex, "field 'degree' must be even and >= 2, got " + std::to_string(degree));
  }
  const int k = degree / 2;
  const Json& emb = member(j, "embeddings");
  if (!emb.is_array() || static_cast<int>(emb.size()) != degree) {
    throw Error(ErrorKind::DimensionMismatch, "field 'embeddings': expected " + std::to_string(degree) + " rows");
  }
  LCMatrix m(degree, k);
  for (int i = 0; i < degree; ++i) {
    const Json& row = emb[i];
    if (!row.is_array() || static_cast<int>(row.size()) != k) {
      throw Error(ErrorKind::DimensionMismatch,
                  "field 'embeddings[" + std::to_string(i) + "]': expected " + std::to_string(k) + " entries");
    }
    for (int c = 0; c < k; ++c) {
      const Json& z = row[c];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        parse_error("field 'embeddings[" + std::to_string(i) + "][" + std::to_string(c) + "]': expected [re, im]");
      }
      m(i, c) = LComplex(z[0].get<long double>(), z[1].get<long double>());
    }
  }
  std::optional<long long> disc;
  if (j.contains("abs_discriminant") && !j.at("abs_discriminant").is_null()) {
    disc = get_as<long long>(j, "abs_discriminant");
  }
  std::optional<long long> n_min;
  if (j.contains("n_min") && !j.at("n_min").is_null()) n_min = get_as<long long>(j, "n_min");
  return make_field(label, std::move(m), disc, n_min);
}

NumberFieldSpec field_from_file(const std::string& path) {
  try {
    return field_from_json(read_json(path));
  } catch (const Error& e) {
    const std::string what = e.what();
    const auto colon = what.find(": ");
    if (what.compare(0, path.size(), path) == 0) throw;
    throw Error(e.kind(), path + ": " + (colon == std::string::npos ? what : what.substr(colon + 2)));
  }
}

Json to_json(const IdealSpec& ideal) {
  Json j;
  j["norm"] = ideal.norm;
  if (ideal.principal) j["principal"] = *ideal.principal;
  j["coeffs"] = Json::array();
  for (Eigen::Index i = 0; i < ideal.coeffs.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < ideal.coeffs.cols(); ++c) row.push_back(ideal.coeffs(i, c));
    j["coeffs"].push_back(row);
  }
  return j;
}

IdealSpec ideal_from_json(const Json& j) {
  IdealSpec ideal;
  ideal.norm = get_as<long long>(j, "norm");
  if (j.contains("principal") && !j.at("principal").is_null()) ideal.principal = get_as<bool>(j, "principal");
  const Json& rows = member(j, "coeffs");
  if (!rows.is_array() || rows.empty()) parse_error("field 'coeffs': expected a square integer matrix");
  const auto n = static_cast<Eigen::Index>(rows.size());
  ideal.coeffs.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorKind::DimensionMismatch, "field 'coeffs': expected a square integer matrix");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      if (!row[static_cast<std::size_t>(c)].is_number_integer()) parse_error("field 'coeffs': entries must be integers");
      ideal.coeffs(i, c) = row[static_cast<std::size_t>(c)].get<long long>();
    }
  }
  return ideal;
}

Json to_json(const FiniteCode& code) {
  Json j;
  j["k"] = code.k();
  j["alpha"] = code.alpha;
  j["P"] = code.power;
  j["shift"] = complex_row(code.shift);
  j["codewords"] = Json::array();
  for (const auto& x : code.codewords) j["codewords"].push_back(complex_row(x));
  j["lattice"] = to_json(code.base);
  return j;
}

FiniteCode codebook_from_json(const Json& j) {
  const int k = get_as<int>(j, "k");
  if (k < 1) parse_error("field 'k' must be positive");
  const double alpha = get_as<double>(j, "alpha");
  const double power = get_as<double>(j, "P");
  if (!(alpha > 0.0) || !(power > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha and P must be positive");
  Lattice base = j.contains("lattice") ? lattice_from_json(j.at("lattice")).lattice
                                       : Lattice(RMatrix::Identity(2 * k, 2 * k));
  if (base.k() != k) throw Error(ErrorKind::DimensionMismatch, "field 'lattice': k differs from codebook k");
  FiniteCode code{std::move(base), alpha, complex_from_row(member(j, "shift"), k, "shift"), power, {}, 0.0};
  const Json& words = member(j, "codewords");
  if (!words.is_array()) parse_error("field 'codewords': expected an array");
  for (std::size_t i = 0; i < words.size(); ++i) {
    code.codewords.push_back(complex_from_row(words[i], k, "codewords[" + std::to_string(i) + "]"));
  }
  if (!code.codewords.empty()) code.rate_bits = rate(code);
  return code;
}

ChannelKind channel_kind_from_string(const std::string& s) {
  if (s == "awgn") return ChannelKind::awgn;
  if (s == "rayleigh" || s == "iid_rayleigh_diag") return ChannelKind::iid_rayleigh_diag;
  if (s == "block" || s == "block_fading_diag") return ChannelKind::block_fading_diag;
  if (s == "mimo2" || s == "mimo2_block") return ChannelKind::mimo2_block;
  throw Error(ErrorKind::Parse, "unknown channel kind '" + s + "'");
}

Json to_json(const ChannelModel& model) {
  Json j{{"kind", to_string(model.kind)}, {"k", model.k}, {"law", "rayleigh"}};
  if (model.kind == ChannelKind::block_fading_diag) j["block"] = model.block;
  if (model.kind == ChannelKind::mimo2_block) j["iid_blocks"] = model.iid_blocks;
  return j;
}

ChannelModel model_from_json(const Json& j) {
  const ChannelKind kind = channel_kind_from_string(get_as<std::string>(j, "kind"));
  if (j.contains("law") && get_as<std::string>(j, "law") != "rayleigh") {
    throw Error(ErrorKind::InvalidArgument, "field 'law': only 'rayleigh' is supported");
  }
  const int k = get_as<int>(j, "k");
  const int block = j.contains("block") ? get_as<int>(j, "block") : 1;
  const bool iid = j.contains("iid_blocks") && get_as<bool>(j, "iid_blocks");
  return make_channel(kind, k, block, iid);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, path + ": cannot open for writing");
  out << j.dump(2) << '\n';
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string canonical_json(const Json& j) {
  std::string out;
  write_canonical(j, out);
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string csv_header() {
  return "config_hash,k,P,alpha,model,trials,error_rate,ci_lo,ci_hi,rate_bits,threshold_bits,"
         "capacity_bits,gap_bits,mu_hat,violations,rh_certified";
}

std::string csv_line(const ResultRow& r) {
  std::string s = r.config_hash;
  auto add = [&s](const std::string& v) {
    s += ',';
    s += v;
  };
  add(std::to_string(r.k));
  add(format_number(r.power));
  add(format_number(r.alpha));
  add(r.model);
  add(std::to_string(r.trials));
  for (double v : {r.error_rate, r.ci_lo, r.ci_hi, r.rate_bits, r.threshold_bits, r.capacity_bits,
                   r.gap_bits, r.mu_hat}) {
    add(format_number(v));
  }
  add(std::to_string(r.violations));
  add(r.rh_certified ? "1" : "0");
  return s;
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) {
    throw Error(ErrorKind::Parse, path + ": unexpected CSV header");
  }
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 16) {
      throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": expected 16 columns");
    }
    try {
      ResultRow r;
      r.config_hash = f[0];
      r.k = std::stoi(f[1]);
      r.power = std::stod(f[2]);
      r.alpha = std::stod(f[3]);
      r.model = f[4];
      r.trials = std::stoull(f[5]);
      r.error_rate = std::stod(f[6]);
      r.ci_lo = std::stod(f[7]);
      r.ci_hi = std::stod(f[8]);
      r.rate_bits = std::stod(f[9]);
      r.threshold_bits = std::stod(f[10]);
      r.capacity_bits = std::stod(f[11]);
      r.gap_bits = std::stod(f[12]);
      r.mu_hat = std::stod(f[13]);
      r.violations = std::stoull(f[14]);
      r.rh_certified = f[15] == "1";
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

}  // namespace latfade
