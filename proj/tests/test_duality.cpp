#include <map>
#include <utility>
#include <vector>

#include "doctest.h"
#include "qgkm/duality.hpp"
#include "qgkm/dualperfect.hpp"
#include "qgkm/errors.hpp"
#include "qgkm/global.hpp"
#include "qgkm/halfalg.hpp"
#include "qgkm/hwmodule.hpp"

using namespace qgkm;

namespace {

MatI mat(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  const int n = static_cast<int>(rows.size());
  const int m = n ? static_cast<int>(rows.begin()->size()) : 0;
  MatI A(n, m);
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (auto v : r) A(i, j++) = v;
    ++i;
  }
  return A;
}

Mat<Rational> rmat(int r, int c, std::initializer_list<std::int64_t> entries) {
  Mat<Rational> m(r, c);
  int k = 0;
  for (auto x : entries) {
    m(k / c, k % c) = Rational(static_cast<long>(x));
    ++k;
  }
  return m;
}

CartanDatum sl2() { return CartanDatum::make(mat({{2}}), {1}); }
CartanDatum a2() { return CartanDatum::make(mat({{2, -1}, {-1, 2}}), {1, 1}); }
CartanDatum im_zero() { return CartanDatum::make(mat({{0}}), {1}); }

struct Bundle {
  PreDualPerfectSpace<Scalar> V;
  GlobalGradedBasis B;
};

Bundle bundle(const ModelOps& M) {
  GeneratedCrystal G = generate_crystal(M);
  GlobalBasis GB = solve_global_basis(M, G);
  return {space_from_model(M), basis_from_global(M, G, GB.vectors)};
}

Bundle module_bundle(const CartanDatum& d, const Weight& lambda, int depth) {
  HWModule m = HWModule::build(d, lambda, depth);
  return bundle(module_ops(m));
}

Bundle halfalg_bundle(const CartanDatum& d, int depth) {
  HalfAlgebra h = HalfAlgebra::build(d, depth);
  return bundle(halfalg_ops(h));
}

// A single raising map of rank one: e kills the second vector at the lower
// weight and sends the first to the top.
DualSpace<Rational> rank_one_space(const CartanDatum& d) {
  const Weight g0 = d.fundamental(0).scaled(2);
  const Weight g1 = g0 - d.simple_root(0);
  std::map<Weight, int> dims{{g0, 1}, {g1, 2}};
  std::map<std::pair<int, Weight>, Mat<Rational>> maps;
  maps[{0, g1}] = rmat(1, 2, {1, 0});
  return DualSpace<Rational>::make(d, {g0}, dims, maps);
}

GradedBasis<Rational> three_node_basis(const CartanDatum& d) {
  const Weight g0 = d.fundamental(0).scaled(2);
  const Weight g1 = g0 - d.simple_root(0);
  GradedBasis<Rational> B;
  B[g0] = rmat(1, 1, {1});
  B[g1] = rmat(2, 2, {1, 0, 0, 1});
  return B;
}

}  // namespace

TEST_CASE("graded dual spaces validate their construction data") {
  CartanDatum d = sl2();
  const Weight g0 = d.fundamental(0).scaled(2);
  const Weight g1 = g0 - d.simple_root(0);
  const Weight up = g0 + d.simple_root(0);

  CHECK_THROWS_WITH_AS(DualSpace<Rational>::make(d, {}, {{g0, 1}}, {}),
                       "a graded space needs at least one top weight", InvalidDatum);
  CHECK_THROWS_WITH_AS(DualSpace<Rational>::make(d, {g0}, {{g0, 0}}, {}),
                       "weight space with nonpositive dimension at (2)", InvalidDatum);
  CHECK_THROWS_WITH_AS(DualSpace<Rational>::make(d, {g0}, {{g0, 1}, {up, 1}}, {}),
                       "weight (4) is not below any top weight", InvalidDatum);
  {
    std::map<std::pair<int, Weight>, Mat<Rational>> maps;
    maps[{2, g1}] = rmat(1, 1, {1});
    CHECK_THROWS_WITH_AS(DualSpace<Rational>::make(d, {g0}, {{g0, 1}, {g1, 1}}, maps),
                         "raising map with an index out of range", InvalidDatum);
  }
  {
    std::map<std::pair<int, Weight>, Mat<Rational>> maps;
    maps[{0, g1}] = rmat(2, 1, {1, 1});
    CHECK_THROWS_WITH_AS(DualSpace<Rational>::make(d, {g0}, {{g0, 1}, {g1, 1}}, maps),
                         "raising map at (0) has the wrong shape", InvalidDatum);
  }

  DualSpace<Rational> D = rank_one_space(d);
  CHECK(D.dim(g0) == 1);
  CHECK(D.dim(g1) == 2);
  CHECK(D.dim(up) == 0);
  // A missing map is the zero map with the right shape.
  Mat<Rational> at_top = D.e(0, g0);
  CHECK(at_top.rows() == 0);
  CHECK(at_top.cols() == 1);
  CHECK((D.e(0, g1) == rmat(1, 2, {1, 0})));
}

TEST_CASE("transposing a space is an exact involution") {
  Bundle b = module_bundle(sl2(), sl2().fundamental(0).scaled(2), 4);
  DualSpace<Scalar> D = transpose_space(b.V);

  CHECK(D.tops == b.V.tops);
  CHECK(D.dims == b.V.dims);
  // Each raising map is the transpose of the lowering map one step above.
  for (const auto& [key, fm] : b.V.maps) {
    const auto& [i, mu] = key;
    if (fm.rows() == 0 || fm.cols() == 0) continue;
    CHECK((D.e(i, mu - b.V.datum.simple_root(i)) == Mat<Scalar>(fm.transpose())));
  }
  // Transposing twice restores every map bit for bit.
  PreDualPerfectSpace<Scalar> V2 = transpose_space(D);
  CHECK(V2.maps.size() == b.V.maps.size());
  for (const auto& [key, m2] : V2.maps) {
    auto it = b.V.maps.find(key);
    REQUIRE(it != b.V.maps.end());
    CHECK((m2 == it->second));
  }
}

TEST_CASE("dual bases invert each block") {
  CartanDatum d = sl2();
  const Weight g0 = d.fundamental(0).scaled(2);

  GradedBasis<Rational> B{{g0, rmat(2, 2, {1, 1, 0, 1})}};
  GradedBasis<Rational> Bd = dual_basis(B);
  CHECK((Bd.at(g0) == rmat(2, 2, {1, 0, -1, 1})));

  GradedBasis<Rational> wide{{g0, rmat(1, 2, {1, 1})}};
  CHECK_THROWS_WITH_AS(dual_basis(wide), "basis block at (2) is not square", NotABasis);
  GradedBasis<Rational> sing{{g0, rmat(2, 2, {1, 1, 1, 1})}};
  CHECK_THROWS_WITH_AS(dual_basis(sing), "basis block at (2) is singular", NotABasis);
}

TEST_CASE("vanishing orders count surviving raising steps") {
  CartanDatum d = sl2();
  DualSpace<Rational> D = rank_one_space(d);
  const Weight g0 = d.fundamental(0).scaled(2);
  const Weight g1 = g0 - d.simple_root(0);

  Vec<Rational> v0(2), v1(2);
  v0 << Rational(1), Rational(0);
  v1 << Rational(0), Rational(1);
  CHECK(vanishing_order(D, 0, g1, v0) == 1);
  CHECK(vanishing_order(D, 0, g1, v1) == 0);
  Vec<Rational> top(1);
  top << Rational(1);
  CHECK(vanishing_order(D, 0, g0, top) == 0);

  Vec<Rational> wrong(3);
  wrong.setZero();
  CHECK_THROWS_WITH_AS(vanishing_order(D, 0, g1, wrong),
                       "vector size does not match the weight space at (0)", InvalidDatum);
  Vec<Rational> zero(2);
  zero.setZero();
  CHECK_THROWS_WITH_AS(vanishing_order(D, 0, g1, zero), "vanishing order of the zero vector",
                       ZeroVector);
}

TEST_CASE("a perfect basis earns orders, companions, and coefficients") {
  Bundle b = module_bundle(sl2(), sl2().fundamental(0).scaled(2), 4);
  DualSpace<Scalar> D = transpose_space(b.V);
  GradedBasis<Scalar> Bd = dual_basis(b.B.basis);
  PerfectOutcome<Scalar> out = verify_perfect(D, Bd);

  REQUIRE(out.accepted);
  const PerfectCertificate<Scalar>& c = out.certificate;
  REQUIRE(c.size() == 3);
  // Nodes run through the weights from the bottom of the string upward.
  CHECK(c.wt[0] == sl2().fundamental(0).scaled(-2));
  CHECK(c.wt[2] == sl2().fundamental(0).scaled(2));
  CHECK(c.order[0][0] == 2);
  CHECK(c.order[1][0] == 1);
  CHECK(c.order[2][0] == 0);
  CHECK(c.e_map[0][0] == 1);
  CHECK(c.e_map[1][0] == 2);
  CHECK(c.e_map[2][0] == -1);
  CHECK(c.f_map[0][0] == -1);
  CHECK(c.f_map[1][0] == 0);
  CHECK(c.f_map[2][0] == 1);
  // The raising coefficient on the bottom node matches the lowering
  // coefficient of the original basis one step above it.
  CHECK(c.coeff[0][0] == Scalar::q(-1) + Scalar::q(1));
  CHECK(c.coeff[1][0] == Scalar(1));
  CHECK(c.coeff[2][0] == Scalar());

  CrystalReport suite = kernel_level_suite(D, Bd, c);
  CHECK(suite.passed);
  CHECK(suite.violations.empty());
}

TEST_CASE("refutations and preconditions name the first failure") {
  CartanDatum d = sl2();
  const Weight g0 = d.fundamental(0).scaled(2);
  const Weight g1 = g0 - d.simple_root(0);
  const Weight up = g0 + d.simple_root(0);
  DualSpace<Rational> D = rank_one_space(d);

  SUBCASE("candidate blocks must match the weight spaces") {
    GradedBasis<Rational> B{{g0, rmat(1, 1, {1})}, {g1, rmat(1, 2, {1, 0})}};
    CHECK_THROWS_WITH_AS(verify_perfect(D, B),
                         "candidate block at (0) does not match the weight space", NotABasis);
    GradedBasis<Rational> S{{g0, rmat(1, 1, {1})}, {g1, rmat(2, 2, {1, 1, 1, 1})}};
    CHECK_THROWS_WITH_AS(verify_perfect(D, S), "candidate block at (0) is rank deficient",
                         NotABasis);
    GradedBasis<Rational> X = three_node_basis(d);
    X[up] = rmat(1, 1, {1});
    CHECK_THROWS_WITH_AS(verify_perfect(D, X), "candidate block at (4) sits at a zero weight space",
                         NotABasis);
  }

  SUBCASE("two vectors raised onto one head are refused") {
    std::map<Weight, int> dims{{g0, 1}, {g1, 2}};
    std::map<std::pair<int, Weight>, Mat<Rational>> maps;
    maps[{0, g1}] = rmat(1, 2, {1, 1});
    DualSpace<Rational> C = DualSpace<Rational>::make(d, {g0}, dims, maps);
    PerfectOutcome<Rational> out = verify_perfect(C, three_node_basis(d));
    CHECK_FALSE(out.accepted);
    CHECK(out.refutation.node == 1);
    CHECK(out.refutation.index == 0);
    CHECK(out.refutation.wt == g1);
    CHECK(out.refutation.reason == "two basis elements share one companion image: also node 0 at (0)");
  }

  SUBCASE("a rank-one raising map splits the lower weight space") {
    PerfectOutcome<Rational> out = verify_perfect(D, three_node_basis(d));
    REQUIRE(out.accepted);
    REQUIRE(out.certificate.size() == 3);
    CHECK(out.certificate.order[0][0] == 1);
    CHECK(out.certificate.order[1][0] == 0);
    CHECK(out.certificate.order[2][0] == 0);
    CHECK(out.certificate.e_map[0][0] == 2);
    CHECK(out.certificate.e_map[1][0] == -1);
    CHECK(out.certificate.f_map[2][0] == 0);
    CHECK(out.certificate.f_map[0][0] == -1);
  }

  SUBCASE("a space with no raising maps is vacuously perfect") {
    DualSpace<Rational> Z = DualSpace<Rational>::make(d, {g0}, {{g0, 1}, {g1, 2}}, {});
    PerfectOutcome<Rational> out = verify_perfect(Z, three_node_basis(d));
    REQUIRE(out.accepted);
    for (int k = 0; k < out.certificate.size(); ++k) {
      CHECK(out.certificate.order[k][0] == 0);
      CHECK(out.certificate.e_map[k][0] == -1);
    }
    CHECK(kernel_level_suite(Z, three_node_basis(d), out.certificate).passed);
  }
}

TEST_CASE("kernel level checks expose a doctored certificate") {
  Bundle b = module_bundle(sl2(), sl2().fundamental(0).scaled(2), 4);
  DualSpace<Scalar> D = transpose_space(b.V);
  GradedBasis<Scalar> Bd = dual_basis(b.B.basis);
  PerfectOutcome<Scalar> out = verify_perfect(D, Bd);
  REQUIRE(out.accepted);

  PerfectCertificate<Scalar> doctored = out.certificate;
  doctored.order[1][0] = 0;
  CrystalReport r = kernel_level_suite(D, Bd, doctored);
  CHECK_FALSE(r.passed);
  REQUIRE(r.violations.size() == 5);
  CHECK(r.violations[0] ==
        "companion image does not drop the vanishing order by one: node 0 at (-2), index 0");
  CHECK(r.violations[1] ==
        "companion image does not drop the vanishing order by one: node 1 at (0), index 0");
  CHECK(r.violations[2] == "order-0 elements are not a basis of the kernel quotient at (0) for index 0");
  CHECK(r.violations[3] == "elements of smaller order do not span the kernel level 1 at (0) for index 0");
  CHECK(r.violations[4] == "order-1 elements are not a basis of the kernel quotient at (0) for index 0");
}

TEST_CASE("every corpus basis stays perfect through the transpose") {
  std::vector<std::pair<const char*, Bundle>> corpus;
  corpus.emplace_back("sl2 highest weight 2", module_bundle(sl2(), sl2().fundamental(0).scaled(2), 4));
  corpus.emplace_back("rank-2 first fundamental", module_bundle(a2(), a2().fundamental(0), 4));
  corpus.emplace_back("rank-2 adjoint",
                      module_bundle(a2(), a2().fundamental(0) + a2().fundamental(1), 5));
  corpus.emplace_back("isotropic tower", module_bundle(im_zero(), im_zero().fundamental(0), 3));
  corpus.emplace_back("half algebra rank 1", halfalg_bundle(sl2(), 6));
  corpus.emplace_back("half algebra rank 2", halfalg_bundle(a2(), 3));

  for (auto& [name, b] : corpus) {
    CAPTURE(name);
    TransposeDualityReport rep = check_transpose_duality(b.V, b.B.basis);
    CHECK(rep.primal_accepted);
    CHECK(rep.dual_accepted);
    CHECK(rep.report.passed);
    CHECK(rep.report.violations.empty());
  }

  SUBCASE("a basis mixing two parallel strings fails on both sides consistently") {
    CartanDatum d = sl2();
    const Weight g0 = d.fundamental(0).scaled(2);
    const Weight g1 = g0 - d.simple_root(0);
    std::map<Weight, int> dims{{g0, 2}, {g1, 2}};
    std::map<std::pair<int, Weight>, Mat<Rational>> maps;
    maps[{0, g0}] = rmat(2, 2, {1, 0, 0, 1});
    PreDualPerfectSpace<Rational> V = PreDualPerfectSpace<Rational>::make(d, {g0}, dims, maps);
    GradedBasis<Rational> B{{g0, rmat(2, 2, {1, 0, 0, 1})}, {g1, rmat(2, 2, {1, 1, 1, -1})}};
    TransposeDualityReport rep = check_transpose_duality(V, B);
    CHECK_FALSE(rep.primal_accepted);
    CHECK_FALSE(rep.dual_accepted);
    CHECK(rep.report.passed);
  }
}
