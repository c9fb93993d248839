#pragma once

// Instance files and JSON reports. Matrices are nested row arrays of [re, im]
// pairs; doubles are written in shortest round-trip form, so parse ∘ serialize
// is exact on the numeric payload.

#include <array>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "gammadisc/gamma.hpp"
#include "gammadisc/report.hpp"

namespace gammadisc {

inline constexpr const char* kReportSchema = "gammadisc/1";
inline constexpr const char* kInstanceSchema = "gammadisc-instance/1";

struct InstanceFile {
  GammaTuple tuple;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> kind;
};

inline nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const nlohmann::json& j, const std::string& what) {
  auto fail = [&](const std::string& why) { return Error(ErrorKind::ParseError, what + ": " + why); };
  if (!j.is_array() || j.empty()) throw fail("expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw fail("expected a non-empty array of entries");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw fail("ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw fail("entries must be [re, im] number pairs");
      m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!all_finite(m)) throw fail("non-finite entry");
  return m;
}

inline nlohmann::json payload_json(const GammaTuple& t) {
  nlohmann::json j;
  j["d"] = t.d;
  j["n"] = t.n;
  j["S"] = nlohmann::json::array();
  for (const auto& s : t.S) j["S"].push_back(matrix_to_json(s));
  j["P"] = matrix_to_json(t.P);
  return j;
}

inline std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

/// SHA-256 of the canonical numeric payload (d, n, S, P).
inline std::string instance_digest(const GammaTuple& t) { return sha256_hex(payload_json(t).dump()); }

inline std::string serialize_instance(const InstanceFile& f) {
  nlohmann::json j = payload_json(f.tuple);
  j["schema"] = kInstanceSchema;
  if (f.tuple.certificate == Certificate::Constructed)
    j["certificate"] = {{"type", "constructed"}, {"source", f.tuple.source}};
  else
    j["certificate"] = {{"type", "necessary-checks-only"}};
  if (f.seed) j["seed"] = *f.seed;
  if (f.kind) j["kind"] = *f.kind;
  return j.dump(1) + "\n";
}

/// Parses and validates; every failure, including violated tuple invariants, is a ParseError.
inline InstanceFile parse_instance(const std::string& text, double tol = kMembershipTol) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "instance must be a JSON object");
  for (const char* key : {"d", "n", "S", "P"})
    if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  if (!j["d"].is_number_integer() || !j["n"].is_number_integer())
    throw Error(ErrorKind::ParseError, "d and n must be integers");
  InstanceFile f;
  auto& t = f.tuple;
  t.d = j["d"].get<int>();
  t.n = j["n"].get<Eigen::Index>();
  if (t.d < 2 || t.n < 1) throw Error(ErrorKind::ParseError, "need d ≥ 2 and n ≥ 1");
  if (!j["S"].is_array() || static_cast<int>(j["S"].size()) != t.d - 1)
    throw Error(ErrorKind::ParseError, "S must list d−1 matrices");
  for (std::size_t i = 0; i < j["S"].size(); ++i)
    t.S.push_back(matrix_from_json(j["S"][i], "S_" + std::to_string(i + 1)));
  t.P = matrix_from_json(j["P"], "P");
  t.certificate = Certificate::NecessaryChecksOnly;
  if (j.contains("certificate") && j["certificate"].is_object() &&
      j["certificate"].value("type", "") == "constructed") {
    t.certificate = Certificate::Constructed;
    t.source = j["certificate"].value("source", "");
  }
  if (j.contains("seed") && j["seed"].is_number_unsigned()) f.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("kind") && j["kind"].is_string()) f.kind = j["kind"].get<std::string>();
  try {
    check_gamma_tuple(t, tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, std::string("instance violates invariant ") + e.what());
  }
  return f;
}

inline InstanceFile load_instance(const std::string& path, double tol = kMembershipTol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str(), tol);
}

inline void save_instance(const InstanceFile& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << serialize_instance(f);
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

inline nlohmann::json report_to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["instance_digest"] = r.instance_digest;
  j["status"] = r.passed() ? "pass" : "fail";
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json cj{{"name", c.name},
                      {"status", std::string(to_string(c.status))},
                      {"residual", c.residual},
                      {"details", c.details}};
    if (c.value) cj["value"] = *c.value;
    j["checks"].push_back(std::move(cj));
  }
  j["tolerances"] = r.tolerances;
  j["timings_ms"] = r.timings_ms;
  return j;
}

}  // namespace gammadisc
