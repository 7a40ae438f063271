#pragma once

#include "hkale/moment.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace hkale {

using Json = nlohmann::json;

// Matrices are stored row-major as {"rows", "cols", "re", "im"} (real
// matrices omit "im"). Doubles go through nlohmann's shortest round-trip
// formatting, so parse(dump(x)) == x bit for bit.
Json to_json(const CMatrix& m);
Json to_json(const RMatrix& m);
Json to_json(const IMatrix& m);
CMatrix cmatrix_from_json(const Json& j);
RMatrix rmatrix_from_json(const Json& j);
IMatrix imatrix_from_json(const Json& j);

Json to_json(const MatrixPair& p);
MatrixPair pair_from_json(const Json& j);

Json to_json(const FiniteSubgroup& g);
FiniteSubgroup group_from_json(const Json& j);

Json to_json(const McKayData& m);
McKayData mckay_from_json(const Json& j);

Json to_json(const InvariantBasis& b);
InvariantBasis basis_from_json(const Json& j);

/// {"coeffs": 3 x (r+1)}.
Json to_json(const Zeta& z);
Zeta zeta_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Writes dump(2) plus a trailing newline; throws Io with the path.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

inline constexpr int kCacheFormat = 1;

struct CachedModule {
  FlatModule module;
  bool from_cache = false;
};

/// `<dir>/<label>.json` holding group, McKay data and the Hom bases. An
/// empty dir disables caching. Unreadable or stale files are rebuilt.
CachedModule load_or_build(const GroupLabel& label, const std::filesystem::path& dir,
                           const Tolerances& tol = default_tolerances());

}  // namespace hkale
