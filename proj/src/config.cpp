#include "htype/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "htype/errors.hpp"

namespace htype {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::InvalidArgument, "config: " + what); }

double number(const json& j, const std::string& where) {
  if (!j.is_number()) malformed(where + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) malformed(where + " must be an integer");
  return j.get<int>();
}

Eigen::MatrixXd parse_matrix(const json& j, int k, const std::string& where) {
  if (!j.is_array()) malformed(where + " must be an array");
  Eigen::MatrixXd m(k, k);
  if (j.size() == static_cast<std::size_t>(k) * k && (j.empty() || j[0].is_number())) {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) m(r, c) = number(j[static_cast<std::size_t>(r * k + c)], where);
    return m;
  }
  if (j.size() != static_cast<std::size_t>(k)) malformed(where + " must have k rows or k*k entries");
  for (int r = 0; r < k; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(k)) malformed(where + " rows must have k entries");
    for (int c = 0; c < k; ++c) m(r, c) = number(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

}  // namespace

GroupConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");

  GroupConfig config;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) malformed("seed must be an unsigned integer");
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("tolerance")) {
    config.tolerance = number(doc["tolerance"], "tolerance");
    if (!(config.tolerance > 0.0)) malformed("tolerance must be positive");
  }

  const bool spectral = doc.contains("rank") || doc.contains("corank") || doc.contains("spectrum") ||
                        doc.contains("kernel_dim");
  const bool explicit_form = doc.contains("S_diagonal") || doc.contains("L_matrices");
  if (spectral == explicit_form) malformed("exactly one of the spectral or explicit forms is required");

  if (spectral) {
    for (const char* key : {"rank", "corank", "spectrum"})
      if (!doc.contains(key)) malformed(std::string("missing key '") + key + "'");
    const int rank = integer(doc["rank"], "rank");
    const int corank = integer(doc["corank"], "corank");
    const int kernel = doc.contains("kernel_dim") ? integer(doc["kernel_dim"], "kernel_dim") : 0;
    if (!doc["spectrum"].is_array()) malformed("spectrum must be an array");
    std::vector<SpectrumEntry> spectrum;
    for (const auto& e : doc["spectrum"]) {
      if (!e.is_object() || !e.contains("alpha") || !e.contains("pair_multiplicity"))
        malformed("spectrum entries need alpha and pair_multiplicity");
      spectrum.push_back({number(e["alpha"], "alpha"), integer(e["pair_multiplicity"], "pair_multiplicity")});
    }
    config.spectral = GroupSpec::make(rank, corank, std::move(spectrum), kernel);
  } else {
    if (!doc.contains("S_diagonal") || !doc.contains("L_matrices")) malformed("explicit form needs S_diagonal and L_matrices");
    const json& sd = doc["S_diagonal"];
    const json& lm = doc["L_matrices"];
    if (!sd.is_array() || sd.empty()) malformed("S_diagonal must be a non-empty array");
    if (!lm.is_array() || lm.empty()) malformed("L_matrices must be a non-empty array");
    ExplicitStructure ex;
    const int k = static_cast<int>(sd.size());
    ex.s_diagonal.resize(k);
    for (int i = 0; i < k; ++i) ex.s_diagonal(i) = number(sd[static_cast<std::size_t>(i)], "S_diagonal");
    for (std::size_t a = 0; a < lm.size(); ++a)
      ex.L.push_back(parse_matrix(lm[a], k, "L_matrices[" + std::to_string(a) + "]"));
    config.explicit_form = std::move(ex);
  }
  return config;
}

GroupConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) malformed("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

StructureConstants realize(const GroupConfig& config, const std::string& name) {
  StructureConstants sc = config.spectral
                              ? build_structure(*config.spectral)
                              : structure_from_explicit(config.explicit_form->s_diagonal, config.explicit_form->L,
                                                        config.tolerance, config.seed);
  sc.name = name;
  return sc;
}

}  // namespace htype
