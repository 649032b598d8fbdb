#include "pnu/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pnu/error.hpp"

namespace pnu {

SampleSet::SampleSet(Matrix points) : points_(std::move(points)) {
  if (!points_.allFinite()) throw InputError("sample set contains non-finite coordinates");
}

SampleSet SampleSet::subset(std::span<const std::size_t> indices) const {
  Matrix out(static_cast<Eigen::Index>(indices.size()), points_.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = points_.row(static_cast<Eigen::Index>(indices[i]));
  }
  SampleSet s;
  s.points_ = std::move(out);
  return s;
}

SampleSet SampleSet::concat(const SampleSet& a, const SampleSet& b) {
  if (a.empty() && a.dim() != b.dim()) return b;
  if (b.empty() && a.dim() != b.dim()) return a;
  if (a.dim() != b.dim()) throw DimensionError("cannot concatenate sample sets of different dimension");
  SampleSet s;
  s.points_.resize(a.points_.rows() + b.points_.rows(), a.points_.cols());
  s.points_.topRows(a.points_.rows()) = a.points_;
  s.points_.bottomRows(b.points_.rows()) = b.points_;
  return s;
}

ClassPrior::ClassPrior(double theta_p) : theta_p_(theta_p) {
  if (!(theta_p > 0.0 && theta_p < 1.0)) {
    throw ConfigError("class prior must lie strictly inside (0,1), got " + std::to_string(theta_p));
  }
}

std::size_t TripleDataset::dim() const {
  std::size_t d = 0;
  bool seen = false;
  for (const SampleSet* s : {&positives, &negatives, &unlabeled}) {
    if (s->empty()) continue;
    if (seen && s->dim() != d) throw DimensionError("P/N/U sets disagree on dimension");
    d = s->dim();
    seen = true;
  }
  if (!seen) d = std::max({positives.dim(), negatives.dim(), unlabeled.dim()});
  return d;
}

const ClassPrior& TripleDataset::require_prior() const {
  if (!prior) throw ConfigError("class prior not set; supply it or estimate it");
  return *prior;
}

SampleSet TripleDataset::all_points() const {
  return SampleSet::concat(labeled_points(), unlabeled);
}

SampleSet TripleDataset::labeled_points() const {
  return SampleSet::concat(positives, negatives);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '+') t.erase(0, 1);
  if (t.empty()) return false;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

TripleDataset parse_csv(std::istream& in, const std::string& label_column) {
  TripleDataset data;
  std::string line;
  std::size_t row = 0;
  // Skip leading blank lines; an empty file yields three empty sets.
  while (std::getline(in, line)) {
    ++row;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) return data;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_line(line);
  std::ptrdiff_t label_idx = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (trim(header[c]) == label_column) label_idx = static_cast<std::ptrdiff_t>(c);
  }
  if (label_idx < 0) throw ParseError(row, "no column named '" + label_column + "'");
  const std::size_t dim = header.size() - 1;

  std::vector<double> p, n, u;
  std::vector<double> features(dim);
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ParseError(row, "expected " + std::to_string(header.size()) + " columns, found " +
                                std::to_string(cells.size()));
    }
    double label = 0.0;
    std::size_t f = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v;
      if (!parse_double(cells[c], v)) {
        throw ParseError(row, "malformed numeric cell '" + trim(cells[c]) + "' in column " +
                                  trim(header[c]));
      }
      if (static_cast<std::ptrdiff_t>(c) == label_idx) {
        label = v;
      } else {
        features[f++] = v;
      }
    }
    std::vector<double>* target = nullptr;
    if (label == 1.0) target = &p;
    else if (label == -1.0) target = &n;
    else if (label == 0.0) target = &u;
    else throw ParseError(row, "unknown label value " + trim(cells[static_cast<std::size_t>(label_idx)]));
    target->insert(target->end(), features.begin(), features.end());
  }

  auto to_set = [dim](const std::vector<double>& flat) {
    const auto rows = static_cast<Eigen::Index>(dim == 0 ? 0 : flat.size() / dim);
    Matrix m(rows, static_cast<Eigen::Index>(dim));
    std::copy(flat.begin(), flat.end(), m.data());
    return SampleSet(std::move(m));
  };
  data.positives = to_set(p);
  data.negatives = to_set(n);
  data.unlabeled = to_set(u);
  return data;
}

TripleDataset load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_csv(in, label_column);
}

std::vector<double> ScalingRecord::apply(std::span<const double> x) const {
  if (x.size() != mins.size()) throw DimensionError("scaling record dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double range = maxs[j] - mins[j];
    out[j] = range > 0.0 ? (x[j] - mins[j]) / range : 0.0;
  }
  return out;
}

SampleSet ScalingRecord::apply(const SampleSet& s) const {
  if (s.empty()) return SampleSet(mins.size());
  if (s.dim() != mins.size()) throw DimensionError("scaling record dimension mismatch");
  Matrix m = s.points();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double lo = mins[static_cast<std::size_t>(j)];
    const double range = maxs[static_cast<std::size_t>(j)] - lo;
    if (range > 0.0) {
      m.col(j) = (m.col(j).array() - lo) / range;
    } else {
      m.col(j).setZero();
    }
  }
  return SampleSet(std::move(m));
}

ScaledDataset scale_features(const TripleDataset& dataset) {
  const SampleSet all = dataset.all_points();
  if (all.empty()) throw DataError("feature scaling needs at least one sample");
  ScalingRecord rec;
  const Eigen::RowVectorXd mins = all.points().colwise().minCoeff();
  const Eigen::RowVectorXd maxs = all.points().colwise().maxCoeff();
  rec.mins.assign(mins.data(), mins.data() + mins.size());
  rec.maxs.assign(maxs.data(), maxs.data() + maxs.size());

  ScaledDataset out{dataset, rec};
  out.data.positives = rec.apply(dataset.positives);
  out.data.negatives = rec.apply(dataset.negatives);
  out.data.unlabeled = rec.apply(dataset.unlabeled);
  return out;
}

std::vector<double> GaussianPair::draw(int label, Rng& rng) const {
  std::vector<double> x(dim);
  for (auto& v : x) v = rng.normal();
  x[0] += (label > 0 ? 0.5 : -0.5) * separation;
  return x;
}

SampleSet GaussianPair::draw_class(int label, std::size_t n, Rng& rng) const {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  const double shift = (label > 0 ? 0.5 : -0.5) * separation;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
    m(i, 0) += shift;
  }
  return SampleSet(std::move(m));
}

SampleSet GaussianPair::draw_mixture(double theta_p, std::size_t n, Rng& rng,
                                     std::vector<int>* labels) const {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  if (labels) labels->resize(n);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const int y = rng.bernoulli(theta_p) ? 1 : -1;
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
    m(i, 0) += (y > 0 ? 0.5 : -0.5) * separation;
    if (labels) (*labels)[static_cast<std::size_t>(i)] = y;
  }
  return SampleSet(std::move(m));
}

TripleDataset synth_gaussians(double theta_p, std::size_t n_p, std::size_t n_n, std::size_t n_u,
                              double separation, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ConfigError("dimension must be positive");
  TripleDataset data;
  data.prior = ClassPrior(theta_p);
  Rng rng(seed);
  const GaussianPair gen{separation, dim};
  data.positives = gen.draw_class(+1, n_p, rng);
  data.negatives = gen.draw_class(-1, n_n, rng);
  data.unlabeled = gen.draw_mixture(theta_p, n_u, rng);
  return data;
}

std::size_t class_count(double theta, std::size_t n) {
  return static_cast<std::size_t>(std::llround(theta * static_cast<double>(n)));
}

ProtocolDraw protocol_split_with_remainder(const LabeledPool& pool, std::size_t n_l,
                                           double theta_l, std::size_t n_u, double theta_u,
                                           std::uint64_t seed) {
  if (!(theta_l >= 0.0 && theta_l <= 1.0)) throw ConfigError("labeled class ratio outside [0,1]");
  const ClassPrior prior(theta_u);
  const std::size_t lp = class_count(theta_l, n_l);
  const std::size_t ln = n_l - lp;
  const std::size_t up = class_count(theta_u, n_u);
  const std::size_t un = n_u - up;
  if (lp + up > pool.positives.size()) {
    throw CapacityError("positive pool has " + std::to_string(pool.positives.size()) +
                        " rows, draw needs " + std::to_string(lp + up));
  }
  if (ln + un > pool.negatives.size()) {
    throw CapacityError("negative pool has " + std::to_string(pool.negatives.size()) +
                        " rows, draw needs " + std::to_string(ln + un));
  }

  Rng rng(seed);
  const auto perm_p = rng.permutation(pool.positives.size());
  const auto perm_n = rng.permutation(pool.negatives.size());
  auto slice = [](const std::vector<std::size_t>& v, std::size_t from, std::size_t count) {
    return std::vector<std::size_t>(v.begin() + static_cast<std::ptrdiff_t>(from),
                                    v.begin() + static_cast<std::ptrdiff_t>(from + count));
  };

  ProtocolDraw out;
  const std::size_t dim = pool.positives.dim() ? pool.positives.dim() : pool.negatives.dim();
  out.data.positives = pool.positives.subset(slice(perm_p, 0, lp));
  out.data.negatives = pool.negatives.subset(slice(perm_n, 0, ln));
  const SampleSet u_pos = pool.positives.subset(slice(perm_p, lp, up));
  const SampleSet u_neg = pool.negatives.subset(slice(perm_n, ln, un));
  SampleSet u = SampleSet::concat(u_pos, u_neg);
  if (u.empty()) u = SampleSet(dim);
  const auto perm_u = rng.permutation(u.size());
  out.data.unlabeled = u.subset(perm_u);
  out.data.prior = prior;
  out.remainder.positives =
      pool.positives.subset(slice(perm_p, lp + up, pool.positives.size() - lp - up));
  out.remainder.negatives =
      pool.negatives.subset(slice(perm_n, ln + un, pool.negatives.size() - ln - un));
  return out;
}

TripleDataset protocol_split(const LabeledPool& pool, std::size_t n_l, double theta_l,
                             std::size_t n_u, double theta_u, std::uint64_t seed) {
  return protocol_split_with_remainder(pool, n_l, theta_l, n_u, theta_u, seed).data;
}

}  // namespace pnu
