#pragma once

#include "nform/hom_vf.hpp"
#include "nform/matrix.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nform {

struct LinearDependenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StaleChainError : std::logic_error {
  using std::logic_error::logic_error;
};

// Inner product on graded fields. The default is the Bargmann product. A
// metric may replace it on coordinate blocks spanned by a few monomials of one
// grade: inside a block the given basis is declared orthogonal with the given
// weights, outside the blocks the Bargmann product is kept and the block is
// orthogonal to everything else.
class Metric {
 public:
  struct Block {
    std::vector<VecMonomial> monomials;
    std::vector<HomVF> basis;  // spans exactly the monomials above
    std::vector<Rational> weights;
  };

  Metric() = default;
  static Metric bargmann() { return Metric(); }
  void add_block(Block block);

  Rational inner(const HomVF& f, const HomVF& g) const;
  QMatrix gram(const std::vector<HomVF>& basis) const;
  // Gram matrix on monomial_basis(grade).
  QMatrix monomial_gram(int grade) const;
  bool is_bargmann() const { return blocks_.empty(); }

 private:
  std::vector<Rational> block_coords(const Block& b, const HomVF& f) const;
  std::map<int, std::vector<Block>> blocks_;  // by grade
};

// Restriction of {generator_field, .} to span(domain_basis), written in the
// monomial basis of target_grade.
struct GradedOperator {
  int source_grade = 0;
  int target_grade = 0;
  std::optional<HomVF> generator_field;
  std::vector<HomVF> domain_basis;
  std::vector<HomVF> codomain_basis;
  QMatrix matrix;  // codomain coordinates x domain coordinates

  HomVF apply(const std::vector<Rational>& domain_coords) const;
  HomVF combine_domain(const std::vector<Rational>& domain_coords) const;
};

std::vector<HomVF> monomial_fields(int grade);

// Coordinates of f in a linearly independent basis; nullopt if f is outside
// the span.
std::optional<std::vector<Rational>> coordinates_in(const std::vector<HomVF>& basis, const HomVF& f, int grade);

GradedOperator operator_matrix(const HomVF& generator_field, const std::vector<HomVF>& domain, int target_grade);

std::vector<HomVF> kernel_basis(const GradedOperator& op);

// Adjoint with respect to the metric: M+ = G_dom^{-1} M^T G_cod, with the roles
// of domain and codomain exchanged.
GradedOperator adjoint_matrix(const GradedOperator& op, const Metric& metric = Metric::bargmann());

enum class FreeChoice { Zero, MinNorm };

// Result of projecting a right-hand side onto the joint range of several
// operators sharing one target grade, and solving for the preimages.
struct JointSolution {
  std::vector<HomVF> fields;           // one preimage per operator (zero if unused)
  std::vector<std::vector<Rational>> coords;
  HomVF projection;                    // P(rhs), the part of rhs in the joint range
};

JointSolution solve_joint(const std::vector<GradedOperator>& ops, const HomVF& rhs, FreeChoice choice,
                          const Metric& metric = Metric::bargmann());

struct HomologicalSolution {
  HomVF field;
  std::vector<Rational> coords;
  HomVF projection;
};

// h with op(h) = P(rhs), P the orthogonal projection onto ran(op).
HomologicalSolution solve_homological(const GradedOperator& op, const HomVF& rhs, FreeChoice choice = FreeChoice::Zero,
                                      const Metric& metric = Metric::bargmann());

// Basis of the orthogonal complement of span(vectors) inside grade k.
std::vector<HomVF> orthogonal_complement(const std::vector<HomVF>& vectors, int grade, const Metric& metric);

struct SubspaceChain {
  int grade = 0;
  std::vector<std::vector<HomVF>> h_spaces;  // H^(0) .. H^(p) at this grade
  std::vector<std::vector<HomVF>> f_spaces;  // F^(0) .. F^(p) at this grade
};

// Computes the spaces H^(s) (common kernel of L_0 .. L_{s-1}) and F^(s)
// (orthogonal complement of the ranges of M_0 .. M_s) on a jet whose parts
// 0..stable_through are final. The jet is referenced, not copied: callers
// advance stable_through as further parts become final.
class ChainBuilder {
 public:
  using BasisProvider = std::function<std::vector<HomVF>(int grade)>;

  ChainBuilder(const JetSeries& jet, Metric metric, BasisProvider h1 = {});

  void set_stable_through(int s) { stable_through_ = s; }
  int stable_through() const { return stable_through_; }
  const JetSeries& jet() const { return *jet_; }
  const Metric& metric() const { return metric_; }

  const std::vector<HomVF>& h_space(int s, int grade);
  // M_s: {W_s, .} restricted to H^(s) at the given source grade.
  GradedOperator restricted(int s, int source_grade);
  // Stages contributing to F^(p) at grade k: s = 0..min(p, k-1).
  std::vector<HomVF> range_vectors(int p, int grade);
  std::vector<HomVF> f_space(int p, int grade);
  SubspaceChain slice(int p, int grade);

 private:
  const JetSeries* jet_;
  Metric metric_;
  BasisProvider h1_;
  int stable_through_ = 0;
  std::map<std::pair<int, int>, std::vector<HomVF>> h_cache_;
};

SubspaceChain build_chain(const JetSeries& stabilized, int stable_through, int p, int grade,
                          const Metric& metric = Metric::bargmann(), ChainBuilder::BasisProvider h1 = {});

// True iff f is orthogonal to every vector in the list.
bool orthogonal_to_all(const HomVF& f, const std::vector<HomVF>& vectors, const Metric& metric);

}  // namespace nform
