#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latfade/channels.hpp"
#include "latfade/codebook.hpp"
#include "latfade/forms.hpp"
#include "latfade/lattice.hpp"
#include "latfade/numfield.hpp"

namespace latfade {

using Json = nlohmann::json;

/// A proven lower bound of a form over the nonzero points of a lattice.
struct Certificate {
  HomogeneousForm form;
  double lower_bound = 0.0;
};

/// Lattice file: { "k", "generators": [[re, im, ...], ...], "certificates"? }.
/// Certificates are [{ "form": <form JSON>, "lower_bound": number }].
struct LatticeFile {
  Lattice lattice;
  std::vector<Certificate> certificates;
};

Json to_json(const Lattice& lattice, const std::vector<Certificate>& certificates = {});
LatticeFile lattice_from_json(const Json& j);

/// { "kind", "k", "block_size"?, "layout"? }
Json to_json(const HomogeneousForm& form);
HomogeneousForm form_from_json(const Json& j);
FormKind form_kind_from_string(const std::string& s);

/// { "label", "degree", "embeddings": [[[re, im], ...], ...], "abs_discriminant"?, "n_min"? }
Json to_json(const NumberFieldSpec& field);
NumberFieldSpec field_from_json(const Json& j);

/// { "coeffs": [[int, ...], ...], "norm", "principal"? }
Json to_json(const IdealSpec& ideal);
IdealSpec ideal_from_json(const Json& j);

/// { "k", "alpha", "P", "shift": [re, im, ...], "codewords": [[re, im, ...], ...],
///   "lattice"? }. The optional "lattice" member holds the unit-volume base.
Json to_json(const FiniteCode& code);
FiniteCode codebook_from_json(const Json& j);

/// { "kind", "k", "block"?, "law": "rayleigh", "iid_blocks"? }
Json to_json(const ChannelModel& model);
ChannelModel model_from_json(const Json& j);
ChannelKind channel_kind_from_string(const std::string& s);

/// Reads and parses a JSON file; Parse errors name the file.
Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

/// Sorted keys, no whitespace, numbers as %.12g.
std::string canonical_json(const Json& j);
std::string format_number(double x);
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t x);

struct ResultRow {
  std::string config_hash;
  int k = 0;
  double power = 0.0;
  double alpha = 0.0;
  std::string model;
  std::size_t trials = 0;
  double error_rate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double rate_bits = 0.0;
  double threshold_bits = 0.0;
  double capacity_bits = 0.0;
  double gap_bits = 0.0;
  double mu_hat = 0.0;
  std::size_t violations = 0;
  bool rh_certified = false;
};

std::string csv_header();
std::string csv_line(const ResultRow& row);
std::vector<ResultRow> read_csv(const std::string& path);

}  // namespace latfade
