#include <cmath>
#include <fstream>

#include "qcorr/cli.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/oracle.hpp"
#include "qcorr/states.hpp"

namespace qcorr::cli {

namespace {

double require_p(const StateSpec& spec) {
  if (!spec.p) throw Error(ErrorKind::ParseError, "family " + spec.family + " needs --p");
  return *spec.p;
}

}  // namespace

Json density_to_json(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  const auto n = m.rows();
  Json doc;
  if (const auto& dims = rho.dims()) {
    doc["dims"] = {dims->dim_a, dims->dim_b};
  } else {
    doc["dims"] = {static_cast<std::size_t>(n)};
  }
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(n * n));
  im.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  doc["re"] = re;
  doc["im"] = im;
  return doc;
}

DensityMatrix density_from_json(const Json& doc) {
  std::vector<std::size_t> dims;
  std::vector<double> re, im;
  try {
    if (!doc.is_object()) throw Error(ErrorKind::ParseError, "density matrix must be an object");
    dims = doc.at("dims").get<std::vector<std::size_t>>();
    re = doc.at("re").get<std::vector<double>>();
    if (doc.contains("im")) im = doc.at("im").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (dims.empty() || dims.size() > 2) {
    throw Error(ErrorKind::ParseError, "dims must list one or two dimensions");
  }
  std::size_t n = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw Error(ErrorKind::ParseError, "zero dimension");
    n *= d;
  }
  if (re.size() != n * n) {
    throw Error(ErrorKind::ParseError, "re has " + std::to_string(re.size()) +
                                           " entries, expected " + std::to_string(n * n));
  }
  if (im.empty()) im.assign(n * n, 0.0);
  if (im.size() != n * n) {
    throw Error(ErrorKind::ParseError, "im has " + std::to_string(im.size()) +
                                           " entries, expected " + std::to_string(n * n));
  }
  const auto sn = static_cast<Eigen::Index>(n);
  ComplexMatrix m(sn, sn);
  for (Eigen::Index i = 0; i < sn; ++i) {
    for (Eigen::Index j = 0; j < sn; ++j) {
      const auto k = static_cast<std::size_t>(i * sn + j);
      if (!std::isfinite(re[k]) || !std::isfinite(im[k])) {
        throw Error(ErrorKind::ParseError, "non-finite matrix entry");
      }
      m(i, j) = Complex(re[k], im[k]);
    }
  }
  std::optional<BipartiteDims> bip;
  if (dims.size() == 2) bip = BipartiteDims{dims[0], dims[1]};
  return validate_density(m, bip);
}

DensityMatrix read_density_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  return density_from_json(doc);
}

DensityMatrix parse_state(const StateSpec& spec) {
  if (spec.file) {
    const DensityMatrix rho = read_density_file(*spec.file);
    if (!rho.dims()) {
      throw Error(ErrorKind::MissingDims, *spec.file + " has no bipartite dims");
    }
    return rho;
  }
  const std::string& f = spec.family;
  if (f == "bell_mixture") return states::bell_mixture(require_p(spec));
  if (f == "nonorthogonal_sep") return states::nonorthogonal_sep(require_p(spec));
  if (f == "werner") return states::werner(require_p(spec));
  if (f == "pure_bell") return states::pure_bell();
  if (f == "random") return oracle::random_state(spec.state_seed, {2, 2}, spec.rank);
  if (f == "product") {
    if (spec.file_a.empty() || spec.file_b.empty()) {
      throw Error(ErrorKind::ParseError, "family product needs --file-a and --file-b");
    }
    return tensor_product(read_density_file(spec.file_a), read_density_file(spec.file_b));
  }
  throw Error(ErrorKind::UnknownFamily, "unknown family '" + f + "'");
}

Json describe_state(const StateSpec& spec) {
  Json d;
  if (spec.file) {
    d["file"] = *spec.file;
    return d;
  }
  d["family"] = spec.family;
  if (spec.p) d["p"] = *spec.p;
  if (spec.family == "product") {
    d["file_a"] = spec.file_a;
    d["file_b"] = spec.file_b;
  }
  if (spec.family == "random") {
    d["state_seed"] = spec.state_seed;
    d["rank"] = spec.rank;
  }
  return d;
}

}  // namespace qcorr::cli
