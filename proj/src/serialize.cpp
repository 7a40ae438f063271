#include "hkale/serialize.hpp"

#include <fstream>
#include <sstream>

namespace hkale {

namespace fs = std::filesystem;

namespace {

template <typename Derived>
Json dense_to_json(const Eigen::MatrixBase<Derived>& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json re = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) re.push_back(m(r, c));
  }
  j["re"] = std::move(re);
  return j;
}

template <typename T>
std::vector<T> values(const Json& j, const char* key, std::size_t expected) {
  auto v = j.at(key).get<std::vector<T>>();
  if (v.size() != expected) {
    throw Error(ErrorKind::Io, std::string("matrix field '") + key + "' has the wrong length");
  }
  return v;
}

}  // namespace

Json to_json(const CMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

Json to_json(const RMatrix& m) { return dense_to_json(m); }
Json to_json(const IMatrix& m) { return dense_to_json(m); }

CMatrix cmatrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto n = static_cast<std::size_t>(rows * cols);
  const auto re = values<double>(j, "re", n);
  const auto im = values<double>(j, "im", n);
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = {re[r * cols + c], im[r * cols + c]};
  }
  return m;
}

RMatrix rmatrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto re = values<double>(j, "re", static_cast<std::size_t>(rows * cols));
  RMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = re[r * cols + c];
  }
  return m;
}

IMatrix imatrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto re = values<int>(j, "re", static_cast<std::size_t>(rows * cols));
  IMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = re[r * cols + c];
  }
  return m;
}

Json to_json(const MatrixPair& p) { return {{"alpha", to_json(p.alpha)}, {"beta", to_json(p.beta)}}; }

MatrixPair pair_from_json(const Json& j) {
  return {cmatrix_from_json(j.at("alpha")), cmatrix_from_json(j.at("beta"))};
}

Json to_json(const FiniteSubgroup& g) {
  Json j;
  j["family"] = family_name(g.label.family);
  j["k"] = g.label.k;
  Json els = Json::array();
  for (const auto& e : g.elements) els.push_back(to_json(CMatrix(e)));
  j["elements"] = std::move(els);
  j["cayley"] = to_json(g.cayley);
  j["inverse"] = g.inverse;
  j["conj_classes"] = g.conj_classes;
  j["class_of"] = g.class_of;
  j["minus_identity"] = g.minus_identity ? Json(*g.minus_identity) : Json(nullptr);
  return j;
}

FiniteSubgroup group_from_json(const Json& j) {
  FiniteSubgroup g;
  g.label = {parse_family(j.at("family").get<std::string>()), j.at("k").get<int>()};
  for (const auto& e : j.at("elements")) g.elements.push_back(CMatrix2(cmatrix_from_json(e)));
  g.cayley = imatrix_from_json(j.at("cayley"));
  g.inverse = j.at("inverse").get<std::vector<int>>();
  g.conj_classes = j.at("conj_classes").get<std::vector<std::vector<int>>>();
  g.class_of = j.at("class_of").get<std::vector<int>>();
  if (!j.at("minus_identity").is_null()) g.minus_identity = j.at("minus_identity").get<int>();
  return g;
}

Json to_json(const McKayData& m) {
  Json j;
  j["r"] = m.r;
  j["marks"] = m.marks;
  j["adjacency"] = to_json(m.adjacency);
  j["cartan_ext"] = to_json(m.cartan_ext);
  j["cartan"] = to_json(m.cartan);
  j["label"] = {{"type", static_cast<int>(m.label.type)}, {"rank", m.label.rank}};
  j["roots"] = m.roots;
  j["rounding_residual"] = m.rounding_residual;
  const auto& iso = m.isotypic;
  Json irreps = Json::array();
  for (const auto& irrep : iso.irreps) {
    Json mats = Json::array();
    for (const auto& x : irrep) mats.push_back(to_json(x));
    irreps.push_back(std::move(mats));
  }
  j["isotypic"] = {{"dims", iso.dims},
                   {"offsets", iso.offsets},
                   {"irreps", std::move(irreps)},
                   {"characters", to_json(iso.characters)},
                   {"change_of_basis", to_json(iso.change_of_basis)},
                   {"reconstruction_error", iso.reconstruction_error}};
  return j;
}

McKayData mckay_from_json(const Json& j) {
  McKayData m;
  m.r = j.at("r").get<int>();
  m.marks = j.at("marks").get<std::vector<int>>();
  m.adjacency = imatrix_from_json(j.at("adjacency"));
  m.cartan_ext = imatrix_from_json(j.at("cartan_ext"));
  m.cartan = imatrix_from_json(j.at("cartan"));
  m.label = {static_cast<AffineType>(j.at("label").at("type").get<int>()),
             j.at("label").at("rank").get<int>()};
  m.roots = j.at("roots").get<std::vector<std::vector<int>>>();
  m.rounding_residual = j.at("rounding_residual").get<double>();
  const Json& iso = j.at("isotypic");
  auto& d = m.isotypic;
  d.dims = iso.at("dims").get<std::vector<int>>();
  d.offsets = iso.at("offsets").get<std::vector<int>>();
  for (const auto& irrep : iso.at("irreps")) {
    std::vector<CMatrix> mats;
    for (const auto& x : irrep) mats.push_back(cmatrix_from_json(x));
    d.irreps.push_back(std::move(mats));
  }
  d.characters = cmatrix_from_json(iso.at("characters"));
  d.change_of_basis = cmatrix_from_json(iso.at("change_of_basis"));
  d.reconstruction_error = iso.at("reconstruction_error").get<double>();
  return m;
}

Json to_json(const InvariantBasis& b) {
  const int m = static_cast<int>(b.dims().size());
  Json hom = Json::array();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Json block = Json::array();
      for (const auto& [ya, yb] : b.hom(i, j)) {
        block.push_back({{"alpha", to_json(ya)}, {"beta", to_json(yb)}});
      }
      hom.push_back(std::move(block));
    }
  }
  return {{"dims", b.dims()}, {"offsets", b.offsets()}, {"hom", std::move(hom)}};
}

InvariantBasis basis_from_json(const Json& j) {
  std::vector<std::vector<std::pair<CMatrix, CMatrix>>> hom;
  for (const auto& block : j.at("hom")) {
    std::vector<std::pair<CMatrix, CMatrix>> pairs;
    for (const auto& y : block) {
      pairs.emplace_back(cmatrix_from_json(y.at("alpha")), cmatrix_from_json(y.at("beta")));
    }
    hom.push_back(std::move(pairs));
  }
  return InvariantBasis(j.at("dims").get<std::vector<int>>(),
                        j.at("offsets").get<std::vector<int>>(), std::move(hom));
}

Json to_json(const Zeta& z) {
  Json rows = Json::array();
  for (int a = 0; a < z.coeffs.rows(); ++a) {
    std::vector<double> row(z.coeffs.cols());
    for (int i = 0; i < z.coeffs.cols(); ++i) row[i] = z.coeffs(a, i);
    rows.push_back(row);
  }
  return {{"coeffs", std::move(rows)}};
}

Zeta zeta_from_json(const Json& j) {
  const auto rows = j.at("coeffs").get<std::vector<std::vector<double>>>();
  if (rows.size() != 3 || rows[0].empty()) {
    throw Error(ErrorKind::InvalidArgument, "zeta needs three coefficient rows");
  }
  RMatrix c(3, static_cast<int>(rows[0].size()));
  for (int a = 0; a < 3; ++a) {
    if (rows[a].size() != rows[0].size()) {
      throw Error(ErrorKind::InvalidArgument, "zeta coefficient rows differ in length");
    }
    for (int i = 0; i < c.cols(); ++i) c(a, i) = rows[a][i];
  }
  return {c};
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Io, "cannot parse '" + path.string() + "': " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.empty()) throw Error(ErrorKind::Io, "empty output path");
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

void write_json_file(const fs::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

CachedModule load_or_build(const GroupLabel& label, const fs::path& dir, const Tolerances& tol) {
  const fs::path file = dir.empty() ? fs::path{} : dir / (label.str() + ".json");
  if (!file.empty() && fs::exists(file)) {
    try {
      const Json j = read_json_file(file);
      if (j.at("format").get<int>() == kCacheFormat && j.at("label").get<std::string>() == label.str()) {
        return {FlatModule::assemble(group_from_json(j.at("group")), mckay_from_json(j.at("mckay")),
                                     basis_from_json(j.at("basis"))),
                true};
      }
    } catch (const std::exception&) {
      // stale or corrupt: rebuild below
    }
  }
  FlatModule m = FlatModule::build(label, tol);
  if (!file.empty()) {
    Json j;
    j["format"] = kCacheFormat;
    j["label"] = label.str();
    j["group"] = to_json(m.group);
    j["mckay"] = to_json(m.mckay);
    j["basis"] = to_json(m.basis);
    write_text_file(file, j.dump() + "\n");
  }
  return {std::move(m), false};
}

}  // namespace hkale
