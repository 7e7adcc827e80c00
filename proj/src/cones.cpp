#include "conicond/cones.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "conicond/errors.hpp"
#include "conicond/linalg.hpp"

namespace conicond {
namespace {

const std::shared_ptr<const std::vector<Cone>>& no_children() {
  static const auto empty = std::make_shared<const std::vector<Cone>>();
  return empty;
}

Vector negate(std::span<const double> x) { return scaled(x, -1.0); }

// ---------------------------------------------------------------------------
// Cone text grammar.

class ConeParser {
 public:
  explicit ConeParser(std::string text) : text_(std::move(text)) {}

  Cone parse_all() {
    Cone c = parse();
    require(pos_ == text_.size(), ErrorKind::kParse, "trailing characters in cone spec '" + text_ + "'");
    return c;
  }

 private:
  Cone parse() {
    if (consume("orthant:")) return Cone::orthant(number());
    if (consume("lorentz:")) return Cone::lorentz(number());
    if (consume("product(")) {
      std::vector<Cone> factors;
      factors.push_back(parse());
      while (consume(",")) factors.push_back(parse());
      expect(")");
      return Cone::product(std::move(factors));
    }
    if (consume("neg(")) {
      Cone inner = parse();
      expect(")");
      return Cone::negated(inner);
    }
    if (consume("dual(")) {
      Cone inner = parse();
      expect(")");
      return inner.dual();
    }
    fail(ErrorKind::kParse, "unrecognized cone spec at '" + text_.substr(pos_) + "'");
  }

  bool consume(std::string_view token) {
    if (text_.compare(pos_, token.size(), token) != 0) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    require(consume(token), ErrorKind::kParse, "expected '" + std::string(token) + "' in cone spec");
  }

  std::size_t number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    require(pos_ > start && pos_ - start < 10, ErrorKind::kParse, "expected a dimension in cone spec");
    return static_cast<std::size_t>(std::stoul(text_.substr(start, pos_ - start)));
  }

  std::string text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Exact enumeration over signed orthants.

bool lex_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Signs y so that its largest-magnitude entry is positive; true if then every
// entry is >= -1e-9. Negative round-off is clipped and y renormalized.
bool sign_to_nonnegative(Vector& y) {
  std::size_t big = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (std::abs(y[i]) > std::abs(y[big])) big = i;
  if (y[big] < 0.0)
    for (double& v : y) v = -v;
  for (double v : y)
    if (v < -1e-9) return false;
  for (double& v : y) v = std::max(v, 0.0);
  const double ny = norm(y);
  if (ny == 0.0) return false;
  for (double& v : y) v /= ny;
  return true;
}

std::vector<std::size_t> mask_indices(std::uint64_t mask, std::size_t n) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (std::uint64_t{1} << i)) idx.push_back(i);
  return idx;
}

Matrix flip_columns(const Matrix& a, const std::vector<int>& signs) {
  Matrix out = a;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      if (signs[j] < 0) out(i, j) = -out(i, j);
  return out;
}

Vector embed(const Vector& y, const std::vector<std::size_t>& idx, std::size_t n, const std::vector<int>& signs) {
  Vector x(n, 0.0);
  for (std::size_t k = 0; k < idx.size(); ++k) x[idx[k]] = signs[idx[k]] * y[k];
  return x;
}

struct Candidate {
  bool found = false;
  double value = 0.0;
  std::vector<std::size_t> support;
  Vector local;
};

// Keeps `value` if it improves on `best` under `sense`
// (+1 maximize, -1 minimize); ties go to the lexicographically smaller support.
void offer(Candidate& best, double value, std::vector<std::size_t> support, Vector local, int sense) {
  const double tie = 1e-12 * std::max(1.0, std::abs(best.value));
  bool take = !best.found;
  if (!take) {
    const double gain = sense * (value - best.value);
    take = gain > tie || (std::abs(value - best.value) <= tie && lex_less(support, best.support));
  }
  if (take) {
    best.found = true;
    best.value = value;
    best.support = std::move(support);
    best.local = std::move(local);
  }
}

ConeQuadraticOptimum exact_max_gram(const Matrix& factor, const std::vector<int>& signs) {
  const std::size_t n = factor.cols();
  const std::size_t r = factor.rows();
  const Matrix g = flip_columns(factor, signs);
  Candidate best;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> idx = mask_indices(mask, n);
    const Matrix gf = g.select_cols(idx);
    Vector y;
    if (idx.size() <= r) {
      const SymmetricEigen e = symmetric_eigen(gf.transpose() * gf);
      y = e.vectors.col(0);
    } else {
      const SymmetricEigen e = symmetric_eigen(gf * gf.transpose());
      y = transpose_times(gf, e.vectors.col(0));
      if (norm(y) <= 1e-300) continue;
    }
    if (!sign_to_nonnegative(y)) continue;
    const Vector gy = gf * y;
    offer(best, dot(gy, gy), std::move(idx), std::move(y), +1);
  }
  require(best.found, ErrorKind::kNumericalFailure, "support enumeration found no candidate");
  ConeQuadraticOptimum out;
  out.value = best.value;
  out.argument = embed(best.local, best.support, n, signs);
  out.method = SearchMethod::kExact;
  out.support = best.support;
  return out;
}

ConeQuadraticOptimum exact_min_image(const Matrix& a, const std::vector<int>& signs) {
  const std::size_t n = a.cols();
  // A minimizer of least support has a simple bottom eigenvalue on its face,
  // which forces |support| <= rank + 1 <= m + 1.
  const std::size_t max_support = std::min(n, a.rows() + 1);
  const Matrix g = flip_columns(a, signs);
  Candidate best;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > max_support) continue;
    std::vector<std::size_t> idx = mask_indices(mask, n);
    const Matrix gf = g.select_cols(idx);
    const SymmetricEigen e = symmetric_eigen(gf.transpose() * gf);
    Vector y = e.vectors.col(idx.size() - 1);
    if (!sign_to_nonnegative(y)) continue;
    const double value = norm(gf * y);
    offer(best, value, std::move(idx), std::move(y), -1);
  }
  require(best.found, ErrorKind::kNumericalFailure, "support enumeration found no candidate");
  ConeQuadraticOptimum out;
  out.value = best.value;
  out.argument = embed(best.local, best.support, n, signs);
  out.method = SearchMethod::kExact;
  out.support = best.support;
  return out;
}

// ---------------------------------------------------------------------------
// Multistart projected ascent for max x^T Q x over C and the unit sphere, Q PSD.

struct AscentOutcome {
  Vector x;
  double value = 0.0;
  bool converged = false;
};

double quadratic(const Matrix& q, std::span<const double> x) { return dot(x, q * x); }

// `ceiling` is the largest eigenvalue of Q, an upper bound for the objective.
AscentOutcome ascend(const Cone& cone, const Matrix& q, double ceiling, Vector x, const MultiStartOptions& options) {
  const double scale = std::max(q.frobenius_norm(), 1e-300);
  double f = quadratic(q, x);
  double t = 64.0 / scale;
  const double t_max = 1e8 / scale;
  const double t_min = 1e-14 / scale;
  int stalled = 0;
  Vector one_back = x, two_back = x, previous_two_step(x.size(), 0.0);
  for (int it = 0; it < options.max_iterations; ++it) {
    const Vector g = q * x;
    bool accepted = false;
    Vector y;
    double fy = 0.0;
    while (t >= t_min) {
      Vector step = cone.project(add(x, scaled(g, t)));
      const double ns = norm(step);
      if (ns > 0.0) {
        y = scaled(step, 1.0 / ns);
        fy = quadratic(q, y);
        if (fy >= f - 1e-15 * std::max(1.0, std::abs(f))) {
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) return {x, f, true};  // no ascent direction left at any step size
    const double moved = norm(sub(y, x));
    stalled = fy <= f + 4e-16 * std::max(1.0, std::abs(f)) ? stalled + 1 : 0;
    x = std::move(y);
    f = std::max(f, fy);
    if (moved < options.stationarity_tolerance || stalled >= 5 || f >= ceiling * (1.0 - 4e-16))
      return {x, f, true};
    t = std::min(2.0 * t, t_max);

    // Slow convergence (zigzag or sublinear) shows up as a two-step
    // displacement that keeps its direction; search along it by doubling.
    Vector two_step = sub(x, two_back);
    const double span = norm(two_step);
    if (it >= 2 && span > 0.0 && dot(two_step, previous_two_step) > 0.9 * span * norm(previous_two_step)) {
      double best_f = f;
      Vector best_z;
      for (double mult = 1.0; mult <= 1e12; mult *= 2.0) {
        const Vector jump = cone.project(add(x, scaled(two_step, mult)));
        const double nj = norm(jump);
        if (nj == 0.0) break;
        Vector z = scaled(jump, 1.0 / nj);
        const double fz = quadratic(q, z);
        if (fz <= best_f) break;
        best_f = fz;
        best_z = std::move(z);
      }
      if (!best_z.empty()) {
        x = std::move(best_z);
        f = best_f;
      }
    }
    two_back = std::move(one_back);
    one_back = x;
    previous_two_step = std::move(two_step);
  }
  return {x, f, false};
}

ConeQuadraticOptimum multistart_max(const Cone& cone, const Matrix& q, const MultiStartOptions& options) {
  const double ceiling = symmetric_eigen(q).values.front();
  std::vector<AscentOutcome> outcomes;
  outcomes.reserve(options.starts);
  for (int k = 0; k < options.starts; ++k) {
    CounterRng rng(options.seed, static_cast<std::uint64_t>(k));
    Vector x0 = (k % 2 == 0) ? cone.sample_extreme(rng) : cone.sample(rng);
    outcomes.push_back(ascend(cone, q, ceiling, std::move(x0), options));
  }
  std::vector<const AscentOutcome*> converged;
  for (const auto& o : outcomes)
    if (o.converged) converged.push_back(&o);
  require(!converged.empty(), ErrorKind::kNumericalFailure, "no multistart run converged");
  // Stable order keeps the earliest start on ties, independent of timing.
  std::stable_sort(converged.begin(), converged.end(),
                   [](const AscentOutcome* a, const AscentOutcome* b) { return a->value > b->value; });
  ConeQuadraticOptimum out;
  out.value = converged.front()->value;
  out.argument = converged.front()->x;
  out.method = SearchMethod::kMultiStart;
  const std::size_t top = std::min<std::size_t>(5, converged.size());
  out.spread = converged.front()->value - converged[top - 1]->value;
  return out;
}

bool use_exact(const Cone& cone, const ConeSearchOptions& options) {
  return !options.force_multistart && cone.dim() <= options.exact_enum_limit && cone.dim() < 63 &&
         cone.sign_pattern().has_value();
}

}  // namespace

// ---------------------------------------------------------------------------
// Cone

Cone::Cone(Kind kind, std::size_t dim, std::vector<Cone> children)
    : kind_(kind),
      dim_(dim),
      children_(children.empty() ? no_children() : std::make_shared<const std::vector<Cone>>(std::move(children))) {}

Cone Cone::orthant(std::size_t n) {
  require(n >= 1, ErrorKind::kDimension, "orthant dimension must be positive");
  return Cone(Kind::kOrthant, n, {});
}

Cone Cone::lorentz(std::size_t n) {
  require(n >= 2, ErrorKind::kDimension, "Lorentz cone needs dimension >= 2");
  return Cone(Kind::kLorentz, n, {});
}

Cone Cone::product(std::vector<Cone> factors) {
  require(!factors.empty(), ErrorKind::kDimension, "product of no cones");
  if (factors.size() == 1) return factors.front();
  std::size_t dim = 0;
  for (const auto& f : factors) dim += f.dim();
  return Cone(Kind::kProduct, dim, std::move(factors));
}

Cone Cone::negated(const Cone& inner) {
  if (inner.kind() == Kind::kNegated) return inner.children().front();
  return Cone(Kind::kNegated, inner.dim(), {inner});
}

bool Cone::contains(std::span<const double> x, double tolerance) const {
  require(x.size() == dim_, ErrorKind::kDimension, "vector dimension does not match the cone");
  switch (kind_) {
    case Kind::kOrthant:
      return std::all_of(x.begin(), x.end(), [&](double v) { return v >= -tolerance; });
    case Kind::kLorentz:
      return x.back() >= norm(x.first(dim_ - 1)) - tolerance;
    case Kind::kProduct: {
      std::size_t offset = 0;
      for (const auto& f : children()) {
        if (!f.contains(x.subspan(offset, f.dim()), tolerance)) return false;
        offset += f.dim();
      }
      return true;
    }
    case Kind::kNegated:
      return children().front().contains(negate(x), tolerance);
  }
  return false;
}

Vector Cone::project(std::span<const double> x) const {
  require(x.size() == dim_, ErrorKind::kDimension, "vector dimension does not match the cone");
  switch (kind_) {
    case Kind::kOrthant: {
      Vector out(x.begin(), x.end());
      for (double& v : out) v = std::max(v, 0.0);
      return out;
    }
    case Kind::kLorentz: {
      const double t = x.back();
      const double s = norm(x.first(dim_ - 1));
      if (s <= t) return Vector(x.begin(), x.end());
      if (s <= -t) return Vector(dim_, 0.0);
      const double c = 0.5 * (s + t);
      Vector out(dim_);
      for (std::size_t i = 0; i + 1 < dim_; ++i) out[i] = c * x[i] / s;
      out.back() = c;
      return out;
    }
    case Kind::kProduct: {
      Vector out;
      out.reserve(dim_);
      std::size_t offset = 0;
      for (const auto& f : children()) {
        const Vector block = f.project(x.subspan(offset, f.dim()));
        out.insert(out.end(), block.begin(), block.end());
        offset += f.dim();
      }
      return out;
    }
    case Kind::kNegated:
      return negate(children().front().project(negate(x)));
  }
  return {};
}

Cone Cone::dual() const {
  switch (kind_) {
    case Kind::kOrthant:
    case Kind::kLorentz:
      return negated(*this);  // self-dual
    case Kind::kProduct: {
      std::vector<Cone> duals;
      for (const auto& f : children()) duals.push_back(f.dual());
      return product(std::move(duals));
    }
    case Kind::kNegated:
      return negated(children().front().dual());
  }
  return *this;
}

std::optional<std::vector<int>> Cone::sign_pattern() const {
  switch (kind_) {
    case Kind::kOrthant:
      return std::vector<int>(dim_, 1);
    case Kind::kLorentz:
      return std::nullopt;
    case Kind::kProduct: {
      std::vector<int> out;
      for (const auto& f : children()) {
        auto s = f.sign_pattern();
        if (!s) return std::nullopt;
        out.insert(out.end(), s->begin(), s->end());
      }
      return out;
    }
    case Kind::kNegated: {
      auto s = children().front().sign_pattern();
      if (s)
        for (int& v : *s) v = -v;
      return s;
    }
  }
  return std::nullopt;
}

Vector Cone::sample(CounterRng& rng) const {
  switch (kind_) {
    case Kind::kOrthant: {
      // Pick a face uniformly by size, then a uniform subset of that size.
      std::vector<std::size_t> coords(dim_);
      std::iota(coords.begin(), coords.end(), 0);
      const std::size_t k = 1 + rng.below(dim_);
      for (std::size_t i = 0; i < k; ++i) std::swap(coords[i], coords[i + rng.below(dim_ - i)]);
      Vector x(dim_, 0.0);
      for (std::size_t i = 0; i < k; ++i) x[coords[i]] = std::abs(rng.gaussian()) + 1e-300;
      return normalized(x);
    }
    case Kind::kLorentz: {
      Vector u = rng.unit_vector(dim_ - 1);
      const double radius = rng.uniform() < 0.5 ? 1.0 : std::sqrt(rng.uniform());
      Vector x = scaled(u, radius);
      x.push_back(1.0);
      return normalized(x);
    }
    case Kind::kProduct: {
      const auto& fs = children();
      std::vector<bool> active(fs.size());
      bool any = false;
      for (std::size_t i = 0; i < fs.size(); ++i) any |= (active[i] = rng.uniform() < 0.5);
      if (!any) active[rng.below(fs.size())] = true;
      Vector x;
      x.reserve(dim_);
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (active[i]) {
          const Vector block = scaled(fs[i].sample(rng), std::abs(rng.gaussian()) + 1e-3);
          x.insert(x.end(), block.begin(), block.end());
        } else {
          x.insert(x.end(), fs[i].dim(), 0.0);
        }
      }
      return normalized(x);
    }
    case Kind::kNegated:
      return negate(children().front().sample(rng));
  }
  return {};
}

Vector Cone::sample_extreme(CounterRng& rng) const {
  switch (kind_) {
    case Kind::kOrthant: {
      Vector x(dim_, 0.0);
      x[rng.below(dim_)] = 1.0;
      return x;
    }
    case Kind::kLorentz: {
      Vector x = rng.unit_vector(dim_ - 1);
      x.push_back(1.0);
      return normalized(x);
    }
    case Kind::kProduct: {
      const auto& fs = children();
      const std::size_t pick = rng.below(fs.size());
      Vector x;
      x.reserve(dim_);
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i == pick) {
          const Vector block = fs[i].sample_extreme(rng);
          x.insert(x.end(), block.begin(), block.end());
        } else {
          x.insert(x.end(), fs[i].dim(), 0.0);
        }
      }
      return x;
    }
    case Kind::kNegated:
      return negate(children().front().sample_extreme(rng));
  }
  return {};
}

std::string Cone::to_string() const {
  switch (kind_) {
    case Kind::kOrthant: return "orthant:" + std::to_string(dim_);
    case Kind::kLorentz: return "lorentz:" + std::to_string(dim_);
    case Kind::kProduct: {
      std::string s = "product(";
      for (std::size_t i = 0; i < children().size(); ++i) s += (i ? "," : "") + children()[i].to_string();
      return s + ")";
    }
    case Kind::kNegated: return "neg(" + children().front().to_string() + ")";
  }
  return {};
}

Cone parse_cone(std::string_view spec) {
  std::string text;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) text += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ConeParser(std::move(text)).parse_all();
}

std::string_view to_string(SearchMethod method) {
  return method == SearchMethod::kExact ? "Exact" : "MultiStart";
}

std::string_view to_string(Feasibility tag) {
  switch (tag) {
    case Feasibility::kPrimalStrict: return "PrimalStrict";
    case Feasibility::kDualStrict: return "DualStrict";
    case Feasibility::kIllPosed: return "IllPosed";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Searches

ConeQuadraticOptimum maximize_gram_form(const Cone& cone, const Matrix& factor, const ConeSearchOptions& options) {
  require(factor.cols() == cone.dim(), ErrorKind::kDimension, "factor width does not match the cone");
  if (use_exact(cone, options)) return exact_max_gram(factor, *cone.sign_pattern());
  ConeQuadraticOptimum out = multistart_max(cone, factor.transpose() * factor, options.multistart);
  const Vector gx = factor * out.argument;
  out.value = dot(gx, gx);
  return out;
}

ConeQuadraticOptimum minimize_image_norm(const Cone& cone, const Matrix& a, const ConeSearchOptions& options) {
  require(a.cols() == cone.dim(), ErrorKind::kDimension, "matrix width does not match the cone");
  if (use_exact(cone, options)) return exact_min_image(a, *cone.sign_pattern());
  // min |Ax|^2 = c - max x^T (cI - A^T A) x with c = |A|^2 keeps the form PSD.
  const double c = std::pow(spectral_norm(a), 2);
  Matrix q = a.transpose() * a;
  q *= -1.0;
  for (std::size_t i = 0; i < q.rows(); ++i) q(i, i) += c;
  ConeQuadraticOptimum out = multistart_max(cone, q, options.multistart);
  out.value = norm(a * out.argument);
  return out;
}

ConeAngleResult cone_subspace_angle(const Cone& cone, const Subspace& w, const ConeSearchOptions& options) {
  require(cone.dim() == w.ambient_dim(), ErrorKind::kDimension, "cone and subspace live in different spaces");
  const ConeQuadraticOptimum opt = maximize_gram_form(cone, w.basis(), options);
  ConeAngleResult out;
  out.witness = normalized(opt.argument);
  out.angle = angle_point_subspace(out.witness, w);
  out.method = opt.method;
  if (opt.method == SearchMethod::kMultiStart) {
    // spread is in squared-cosine units; report it on the cosine scale.
    const double best = std::sqrt(std::max(opt.value, 0.0));
    out.certified_gap = best - std::sqrt(std::max(opt.value - opt.spread, 0.0));
  }
  return out;
}

FeasibilityStatus classify_feasibility(const Cone& cone, const Subspace& w, double angle_threshold,
                                       const ConeSearchOptions& options) {
  FeasibilityStatus status;
  status.primal = cone_subspace_angle(cone, w, options);
  status.dual = cone_subspace_angle(cone.dual(), complement(w), options);
  const bool primal = status.primal.angle > angle_threshold;
  const bool dual = status.dual.angle > angle_threshold;
  if (primal && dual)
    fail(ErrorKind::kInconsistentClassification,
         "both angle(C,W) and angle(dual C, W^perp) exceed the threshold; theorem of alternatives violated");
  status.tag = primal ? Feasibility::kPrimalStrict : dual ? Feasibility::kDualStrict : Feasibility::kIllPosed;
  return status;
}

}  // namespace conicond
