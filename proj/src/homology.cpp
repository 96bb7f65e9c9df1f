#include "nform/homology.hpp"

#include "nform/algebra.hpp"

#include <set>
#include <string>

namespace nform {

void Metric::add_block(Block block) {
  if (block.basis.size() != block.monomials.size() || block.weights.size() != block.basis.size())
    throw std::invalid_argument("metric block: basis, monomials and weights must have equal length");
  if (block.monomials.empty()) return;
  int grade = block.monomials.front().grade();
  std::set<VecMonomial> span(block.monomials.begin(), block.monomials.end());
  for (const auto& b : block.basis)
    for (const auto& [m, c] : b.terms())
      if (!span.count(m)) throw std::invalid_argument("metric block basis leaves its monomial span");
  for (const auto& w : block.weights)
    if (sgn(w) <= 0) throw std::invalid_argument("metric block weights must be positive");
  blocks_[grade].push_back(std::move(block));
}

std::vector<Rational> Metric::block_coords(const Block& b, const HomVF& f) const {
  HomVF restricted(b.monomials.front().grade());
  for (const auto& m : b.monomials) restricted.add_term(m, f.coeff(m));
  QMatrix a(b.monomials.size(), b.basis.size());
  for (std::size_t j = 0; j < b.basis.size(); ++j)
    for (std::size_t i = 0; i < b.monomials.size(); ++i) a(i, j) = b.basis[j].coeff(b.monomials[i]);
  std::vector<Rational> rhs;
  for (const auto& m : b.monomials) rhs.push_back(restricted.coeff(m));
  auto x = solve(a, rhs);
  if (!x) throw std::logic_error("metric block basis does not span its monomials");
  return *x;
}

Rational Metric::inner(const HomVF& f, const HomVF& g) const {
  if (f.is_zero() || g.is_zero() || f.grade() != g.grade()) return Rational(0);
  auto it = blocks_.find(f.grade());
  if (it == blocks_.end()) return bargmann_inner(f, g);
  std::set<VecMonomial> in_blocks;
  Rational out(0);
  for (const auto& b : it->second) {
    in_blocks.insert(b.monomials.begin(), b.monomials.end());
    auto cf = block_coords(b, f);
    auto cg = block_coords(b, g);
    for (std::size_t i = 0; i < cf.size(); ++i) out += b.weights[i] * cf[i] * cg[i];
  }
  for (const auto& [m, c] : f.terms()) {
    if (in_blocks.count(m)) continue;
    Rational d = g.coeff(m);
    if (!is_zero(d)) out += c * d * Rational(bargmann_norm(m));
  }
  return out;
}

QMatrix Metric::gram(const std::vector<HomVF>& basis) const {
  QMatrix g(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      g(i, j) = inner(basis[i], basis[j]);
      g(j, i) = g(i, j);
    }
  return g;
}

QMatrix Metric::monomial_gram(int grade) const { return gram(monomial_fields(grade)); }

std::vector<HomVF> monomial_fields(int grade) {
  std::vector<HomVF> out;
  for (const auto& m : HomVF::monomial_basis(grade)) out.push_back(HomVF::monomial(m));
  return out;
}

HomVF GradedOperator::apply(const std::vector<Rational>& domain_coords) const {
  auto image = matrix.apply(domain_coords);
  HomVF out(target_grade);
  for (std::size_t i = 0; i < image.size(); ++i)
    if (!is_zero(image[i])) out += image[i] * codomain_basis[i];
  return out;
}

HomVF GradedOperator::combine_domain(const std::vector<Rational>& domain_coords) const {
  HomVF out(source_grade);
  for (std::size_t j = 0; j < domain_coords.size(); ++j)
    if (!is_zero(domain_coords[j])) out += domain_coords[j] * domain_basis[j];
  return out;
}

namespace {

QMatrix coordinate_matrix(const std::vector<HomVF>& vectors, int grade) {
  std::vector<std::vector<Rational>> cols;
  cols.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (!v.is_zero() && v.grade() != grade) throw std::invalid_argument("vector of unexpected grade");
    cols.push_back(v.is_zero() ? std::vector<Rational>(HomVF::basis_size(grade), Rational(0)) : v.coords());
  }
  return QMatrix::from_columns(HomVF::basis_size(grade), cols);
}

bool is_diagonal(const QMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && !is_zero(m(i, j))) return false;
  return true;
}

}  // namespace

std::optional<std::vector<Rational>> coordinates_in(const std::vector<HomVF>& basis, const HomVF& f, int grade) {
  if (basis.empty()) {
    if (f.is_zero()) return std::vector<Rational>{};
    return std::nullopt;
  }
  if (!f.is_zero() && f.grade() != grade) return std::nullopt;
  QMatrix a = coordinate_matrix(basis, grade);
  std::vector<Rational> rhs = f.is_zero() ? std::vector<Rational>(HomVF::basis_size(grade), Rational(0)) : f.coords();
  return solve(a, rhs);
}

GradedOperator operator_matrix(const HomVF& generator_field, const std::vector<HomVF>& domain, int target_grade) {
  GradedOperator op;
  op.target_grade = target_grade;
  op.source_grade = target_grade - generator_field.grade();
  op.generator_field = generator_field;
  op.domain_basis = domain;
  op.codomain_basis = monomial_fields(target_grade);
  if (!domain.empty() && rank(coordinate_matrix(domain, op.source_grade)) != domain.size())
    throw LinearDependenceError("operator domain basis is linearly dependent");
  std::vector<std::vector<Rational>> cols;
  for (const auto& d : domain) {
    HomVF image = bracket(generator_field, d);
    if (image.is_zero())
      cols.emplace_back(HomVF::basis_size(target_grade), Rational(0));
    else if (image.grade() != target_grade)
      throw std::invalid_argument("bracket does not land in the target grade");
    else
      cols.push_back(image.coords());
  }
  op.matrix = domain.empty() ? QMatrix(HomVF::basis_size(target_grade), 0)
                             : QMatrix::from_columns(HomVF::basis_size(target_grade), cols);
  return op;
}

std::vector<HomVF> kernel_basis(const GradedOperator& op) {
  std::vector<HomVF> out;
  for (const auto& v : kernel(op.matrix)) out.push_back(op.combine_domain(v));
  return out;
}

GradedOperator adjoint_matrix(const GradedOperator& op, const Metric& metric) {
  GradedOperator adj;
  adj.source_grade = op.target_grade;
  adj.target_grade = op.source_grade;
  adj.domain_basis = op.codomain_basis;
  adj.codomain_basis = op.domain_basis;
  QMatrix gd = metric.gram(op.domain_basis);
  QMatrix gc = metric.gram(op.codomain_basis);
  QMatrix mt = op.matrix.transpose();
  if (is_diagonal(gd) && is_diagonal(gc)) {
    adj.matrix = QMatrix(mt.rows(), mt.cols());
    for (std::size_t i = 0; i < mt.rows(); ++i)
      for (std::size_t j = 0; j < mt.cols(); ++j)
        if (!is_zero(mt(i, j))) adj.matrix(i, j) = mt(i, j) * gc(j, j) / gd(i, i);
  } else {
    adj.matrix = inverse(gd) * mt * gc;
  }
  return adj;
}

JointSolution solve_joint(const std::vector<GradedOperator>& ops, const HomVF& rhs, FreeChoice choice,
                          const Metric& metric) {
  JointSolution out;
  if (ops.empty()) throw std::invalid_argument("solve_joint needs at least one operator");
  const int target = ops.front().target_grade;
  const std::size_t n = HomVF::basis_size(target);
  for (const auto& op : ops)
    if (op.target_grade != target || op.matrix.rows() != n)
      throw std::invalid_argument("joint operators must share the monomial codomain");
  if (!rhs.is_zero() && rhs.grade() != target) throw std::invalid_argument("rhs has the wrong grade");

  std::vector<std::vector<Rational>> cols;
  std::vector<std::pair<std::size_t, std::size_t>> owner;
  for (std::size_t b = 0; b < ops.size(); ++b)
    for (std::size_t j = 0; j < ops[b].matrix.cols(); ++j) {
      cols.push_back(ops[b].matrix.column(j));
      owner.emplace_back(b, j);
    }
  out.projection = HomVF(target);
  for (const auto& op : ops) {
    out.fields.emplace_back(op.source_grade);
    out.coords.emplace_back(op.matrix.cols(), Rational(0));
  }
  if (cols.empty() || rhs.is_zero()) return out;

  QMatrix c = QMatrix::from_columns(n, cols);
  std::vector<Rational> f = rhs.coords();
  QMatrix g = metric.monomial_gram(target);
  auto pivots = echelon_form(c).pivots;
  if (pivots.empty()) return out;
  QMatrix cj = c.select_columns(pivots);
  QMatrix cjt_g = cj.transpose() * g;
  auto cj_coeffs = solve(cjt_g * cj, cjt_g.apply(f));
  if (!cj_coeffs) throw std::logic_error("normal equations are singular");
  std::vector<Rational> p = cj.apply(*cj_coeffs);
  out.projection = HomVF::from_coords(target, p);

  std::vector<Rational> all(cols.size(), Rational(0));
  if (choice == FreeChoice::Zero) {
    for (std::size_t i = 0; i < pivots.size(); ++i) all[pivots[i]] = (*cj_coeffs)[i];
  } else {
    // Minimal norm in the domain metric: x = D^{-1} C^T y with C D^{-1} C^T y = p.
    std::vector<HomVF> domain;
    for (const auto& op : ops)
      for (const auto& d : op.domain_basis) domain.push_back(d);
    QMatrix dinv = inverse(metric.gram(domain));
    QMatrix k = dinv * c.transpose();
    auto y = solve(c * k, p);
    if (!y) throw std::logic_error("min-norm system is inconsistent");
    all = k.apply(*y);
  }
  for (std::size_t i = 0; i < all.size(); ++i) out.coords[owner[i].first][owner[i].second] = all[i];
  for (std::size_t b = 0; b < ops.size(); ++b) out.fields[b] = ops[b].combine_domain(out.coords[b]);
  return out;
}

HomologicalSolution solve_homological(const GradedOperator& op, const HomVF& rhs, FreeChoice choice,
                                      const Metric& metric) {
  JointSolution j = solve_joint({op}, rhs, choice, metric);
  return {j.fields.front(), j.coords.front(), j.projection};
}

std::vector<HomVF> orthogonal_complement(const std::vector<HomVF>& vectors, int grade, const Metric& metric) {
  std::vector<HomVF> nonzero;
  for (const auto& v : vectors)
    if (!v.is_zero()) nonzero.push_back(v);
  if (nonzero.empty()) return monomial_fields(grade);
  QMatrix v = coordinate_matrix(nonzero, grade);
  QMatrix a = v.transpose() * metric.monomial_gram(grade);
  std::vector<HomVF> out;
  for (const auto& x : kernel(a)) out.push_back(HomVF::from_coords(grade, x));
  return out;
}

bool orthogonal_to_all(const HomVF& f, const std::vector<HomVF>& vectors, const Metric& metric) {
  for (const auto& v : vectors)
    if (!is_zero(metric.inner(f, v))) return false;
  return true;
}

ChainBuilder::ChainBuilder(const JetSeries& jet, Metric metric, BasisProvider h1)
    : jet_(&jet), metric_(std::move(metric)), h1_(std::move(h1)) {}

const std::vector<HomVF>& ChainBuilder::h_space(int s, int grade) {
  if (s < 0 || grade < 0) throw std::invalid_argument("h_space index out of range");
  if (s - 1 > stable_through_)
    throw StaleChainError("H^(" + std::to_string(s) + ") needs parts up to grade " + std::to_string(s - 1) +
                          " to be final; only " + std::to_string(stable_through_) + " are");
  auto key = std::make_pair(s, grade);
  auto it = h_cache_.find(key);
  if (it != h_cache_.end()) return it->second;
  std::vector<HomVF> basis;
  if (s == 0) {
    basis = monomial_fields(grade);
  } else if (s == 1 && h1_) {
    basis = h1_(grade);
  } else if (s >= 2 && jet_->part(s - 1).is_zero()) {
    basis = h_space(s - 1, grade);
  } else {
    basis = kernel_basis(restricted(s - 1, grade));
  }
  return h_cache_.emplace(key, std::move(basis)).first->second;
}

GradedOperator ChainBuilder::restricted(int s, int source_grade) {
  if (s > stable_through_)
    throw StaleChainError("M_" + std::to_string(s) + " needs grade " + std::to_string(s) + " to be final");
  if (s > jet_->order()) throw std::out_of_range("stage beyond jet order");
  std::vector<HomVF> domain = h_space(s, source_grade);
  return operator_matrix(jet_->part(s), domain, source_grade + s);
}

std::vector<HomVF> ChainBuilder::range_vectors(int p, int grade) {
  std::vector<HomVF> out;
  for (int s = 0; s <= std::min(p, grade - 1); ++s) {
    if (s > 0 && jet_->part(s).is_zero()) continue;
    GradedOperator op = restricted(s, grade - s);
    for (std::size_t j = 0; j < op.matrix.cols(); ++j) {
      std::vector<Rational> e(op.matrix.cols(), Rational(0));
      e[j] = 1;
      out.push_back(op.apply(e));
    }
  }
  return out;
}

std::vector<HomVF> ChainBuilder::f_space(int p, int grade) {
  return orthogonal_complement(range_vectors(p, grade), grade, metric_);
}

SubspaceChain ChainBuilder::slice(int p, int grade) {
  if (p > stable_through_)
    throw StaleChainError("chain up to stage " + std::to_string(p) + " requested but only grades up to " +
                          std::to_string(stable_through_) + " are final");
  SubspaceChain chain;
  chain.grade = grade;
  for (int s = 0; s <= p; ++s) {
    chain.h_spaces.push_back(h_space(s, grade));
    chain.f_spaces.push_back(f_space(s, grade));
  }
  return chain;
}

SubspaceChain build_chain(const JetSeries& stabilized, int stable_through, int p, int grade, const Metric& metric,
                          ChainBuilder::BasisProvider h1) {
  if (stable_through > stabilized.order()) throw std::invalid_argument("stable prefix exceeds jet order");
  ChainBuilder builder(stabilized, metric, std::move(h1));
  builder.set_stable_through(stable_through);
  return builder.slice(p, grade);
}

}  // namespace nform
