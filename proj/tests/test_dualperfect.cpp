#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "doctest.h"
#include "qgkm/dualperfect.hpp"
#include "qgkm/errors.hpp"
#include "qgkm/global.hpp"

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

Vec<Rational> rvec(std::initializer_list<std::int64_t> entries) {
  Vec<Rational> v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index k = 0;
  for (auto x : entries) v[k++] = Rational(static_cast<long>(x));
  return v;
}

CartanDatum sl2() { return CartanDatum::make(mat({{2}}), {1}); }
CartanDatum a2() { return CartanDatum::make(mat({{2, -1}, {-1, 2}}), {1, 1}); }
CartanDatum im_zero() { return CartanDatum::make(mat({{0}}), {1}); }

bool mentions(const std::vector<std::string>& msgs, const std::string& needle) {
  return std::any_of(msgs.begin(), msgs.end(), [&](const std::string& m) {
    return m.find(needle) != std::string::npos;
  });
}

// The 2-string space over the rationals: a chain v0 -> v1 -> v2 through three
// weights plus one extra vector w1 at the middle weight that the lowering
// operator kills.
PreDualPerfectSpace<Rational> two_string_space(const CartanDatum& d) {
  const Weight g0 = d.fundamental(0).scaled(2);
  const Weight g1 = g0 - d.simple_root(0);
  const Weight g2 = g1 - d.simple_root(0);
  std::map<Weight, int> dims{{g0, 1}, {g1, 2}, {g2, 1}};
  std::map<std::pair<int, Weight>, Mat<Rational>> maps;
  maps[{0, g0}] = rmat(2, 1, {1, 0});
  maps[{0, g1}] = rmat(1, 2, {1, 0});
  return PreDualPerfectSpace<Rational>::make(d, {g0}, dims, maps);
}

GradedBasis<Rational> two_string_basis(const CartanDatum& d) {
  const Weight g0 = d.fundamental(0).scaled(2);
  const Weight g1 = g0 - d.simple_root(0);
  const Weight g2 = g1 - d.simple_root(0);
  GradedBasis<Rational> B;
  B[g0] = rmat(1, 1, {1});
  B[g1] = rmat(2, 2, {1, 0, 0, 1});
  B[g2] = rmat(1, 1, {1});
  return B;
}

}  // namespace

TEST_CASE("two-string space: levels, certificate, graph and power suite") {
  const CartanDatum d = sl2();
  const Weight g0 = d.fundamental(0).scaled(2);
  const Weight g1 = g0 - d.simple_root(0);
  const Weight g2 = g1 - d.simple_root(0);
  auto V = two_string_space(d);

  SUBCASE("filtration levels of single vectors") {
    CHECK(ell(V, 0, g1, rvec({1, 0})) == 1);  // v1 = f(v0)
    CHECK(ell(V, 0, g1, rvec({0, 1})) == 0);  // w1 is not an image
    CHECK(ell(V, 0, g1, rvec({1, 7})) == 0);  // mixing drops to the lower level
    CHECK(ell(V, 0, g2, rvec({1})) == 2);     // v2 = f^2(v0)
    CHECK(ell(V, 0, g0, rvec({1})) == 0);
    CHECK_THROWS_AS(ell(V, 0, g1, rvec({0, 0})), ZeroVector);
    CHECK_THROWS_AS(ell(V, 0, g1, rvec({1})), InvalidDatum);
  }

  SUBCASE("the standard basis is dual perfect with the expected certificate") {
    auto out = verify_dual_perfect(V, two_string_basis(d));
    REQUIRE(out.accepted);
    const auto& C = out.certificate;
    REQUIRE(C.size() == 4);
    // Canonical order: weights ascending, so the chain bottom comes first.
    CHECK(C.wt[0] == g2);
    CHECK(C.wt[1] == g1);
    CHECK(C.wt[2] == g1);
    CHECK(C.wt[3] == g0);
    CHECK(C.ell[0][0] == 2);
    CHECK(C.ell[1][0] == 1);
    CHECK(C.ell[2][0] == 0);
    CHECK(C.ell[3][0] == 0);
    CHECK(C.f_map[3][0] == 1);
    CHECK(C.f_map[1][0] == 0);
    CHECK(C.f_map[2][0] == -1);  // w1 maps to zero
    CHECK(C.f_map[0][0] == -1);  // below lies a zero weight space
    CHECK(C.e_map[0][0] == 1);
    CHECK(C.e_map[1][0] == 3);
    CHECK(C.e_map[2][0] == -1);
    CHECK(C.e_map[3][0] == -1);
    CHECK(C.coeff[3][0] == Rational(1));
    CHECK(C.coeff[1][0] == Rational(1));
    CHECK(C.coeff[2][0] == Rational(0));

    AbstractCrystal X = extract_graph(d, C);
    CHECK(check_crystal_axioms(d, X).passed);
    CHECK(X.eps[0][0] == ExtInt(2));
    CHECK(X.phi[3][0] == ExtInt(2));  // 0 + <h, 2 omega>
    CHECK(companion_power_suite(V, two_string_basis(d), C, 4).passed);
  }

  SUBCASE("a space without lowering maps yields the empty companion map") {
    std::map<Weight, int> dims{{g0, 2}};
    auto W = PreDualPerfectSpace<Rational>::make(d, {g0}, dims, {});
    GradedBasis<Rational> B{{g0, rmat(2, 2, {1, 0, 0, 1})}};
    auto out = verify_dual_perfect(W, B);
    REQUIRE(out.accepted);
    CHECK(out.certificate.f_map[0][0] == -1);
    CHECK(out.certificate.f_map[1][0] == -1);
    CHECK(out.certificate.ell[0][0] == 0);
    CHECK(check_crystal_axioms(d, extract_graph(d, out.certificate)).passed);
    CHECK(companion_power_suite(W, B, out.certificate, 3).passed);
  }
}

TEST_CASE("refutations blame a concrete element and index") {
  const CartanDatum d = sl2();
  const Weight g0 = d.fundamental(0).scaled(2);
  const Weight g1 = g0 - d.simple_root(0);
  const Weight g2 = g1 - d.simple_root(0);

  SUBCASE("a basis mixing the two levels of a string is refuted") {
    auto V = two_string_space(d);
    auto B = two_string_basis(d);
    B[g1] = rmat(2, 2, {0, 1, 1, 1});  // columns w1 and v1 + w1, both at level 0
    auto out = verify_dual_perfect(V, B);
    REQUIRE_FALSE(out.accepted);
    CHECK(out.refutation.node == 3);
    CHECK(out.refutation.index == 0);
    CHECK((out.refutation.wt == g0));
    CHECK(out.refutation.reason == "image leaves the span of the next filtration level");
  }

  SUBCASE("two elements of one level that are dependent modulo the next level") {
    std::map<Weight, int> dims{{g0, 1}, {g1, 2}, {g2, 2}};
    std::map<std::pair<int, Weight>, Mat<Rational>> maps;
    maps[{0, g0}] = rmat(2, 1, {1, 0});
    maps[{0, g1}] = rmat(2, 2, {1, 0, 0, 1});
    auto V = PreDualPerfectSpace<Rational>::make(d, {g0}, dims, maps);
    GradedBasis<Rational> B;
    B[g0] = rmat(1, 1, {1});
    B[g1] = rmat(2, 2, {0, 1, 1, 0});
    B[g2] = rmat(2, 2, {1, 1, 1, -1});  // both columns at level 1, dependent mod level 2
    auto out = verify_dual_perfect(V, B);
    REQUIRE_FALSE(out.accepted);
    CHECK(out.refutation.node == 0);
    CHECK(out.refutation.index == 0);
    CHECK((out.refutation.wt == g2));
    CHECK(out.refutation.reason ==
          "elements of one filtration level are dependent modulo the next level at " +
              g2.to_string());
  }

  SUBCASE("an image touching two basis elements") {
    std::map<Weight, int> dims{{g0, 2}, {g1, 2}};
    std::map<std::pair<int, Weight>, Mat<Rational>> maps;
    maps[{0, g0}] = rmat(2, 2, {1, 0, 0, 1});
    auto V = PreDualPerfectSpace<Rational>::make(d, {g0}, dims, maps);
    GradedBasis<Rational> B;
    B[g0] = rmat(2, 2, {1, 0, 0, 1});
    B[g1] = rmat(2, 2, {1, 1, 1, -1});
    auto out = verify_dual_perfect(V, B);
    REQUIRE_FALSE(out.accepted);
    CHECK(out.refutation.node == 2);
    CHECK(out.refutation.index == 0);
    CHECK(out.refutation.reason ==
          "image touches more than one basis element modulo two filtration steps");
  }

  SUBCASE("two elements sharing one companion image") {
    std::map<Weight, int> dims{{g0, 2}, {g1, 2}};
    std::map<std::pair<int, Weight>, Mat<Rational>> maps;
    maps[{0, g0}] = rmat(2, 2, {1, 1, 0, 0});
    auto V = PreDualPerfectSpace<Rational>::make(d, {g0}, dims, maps);
    GradedBasis<Rational> B;
    B[g0] = rmat(2, 2, {1, 0, 0, 1});
    B[g1] = rmat(2, 2, {1, 0, 0, 1});
    auto out = verify_dual_perfect(V, B);
    REQUIRE_FALSE(out.accepted);
    CHECK(out.refutation.node == 3);
    CHECK(out.refutation.index == 0);
    CHECK(out.refutation.reason ==
          "two basis elements share one companion image: also node 2 at " + g0.to_string());
  }
}

TEST_CASE("structural preconditions throw") {
  const CartanDatum d = sl2();
  const Weight g0 = d.fundamental(0).scaled(2);
  const Weight g1 = g0 - d.simple_root(0);
  auto V = two_string_space(d);

  SUBCASE("candidate bases that are no graded basis") {
    auto B = two_string_basis(d);
    B.erase(g1);
    CHECK_THROWS_AS(verify_dual_perfect(V, B), NotABasis);

    B = two_string_basis(d);
    B[g1] = rmat(2, 1, {1, 0});
    CHECK_THROWS_WITH_AS(verify_dual_perfect(V, B),
                         ("candidate block at " + g1.to_string() +
                          " does not match the weight space")
                             .c_str(),
                         NotABasis);

    B = two_string_basis(d);
    B[g1] = rmat(2, 2, {1, 2, 2, 4});
    CHECK_THROWS_WITH_AS(verify_dual_perfect(V, B),
                         ("candidate block at " + g1.to_string() + " is rank deficient").c_str(),
                         NotABasis);

    B = two_string_basis(d);
    const Weight stray = g0 + d.simple_root(0);
    B[stray] = rmat(0, 1, {});
    CHECK_THROWS_WITH_AS(
        verify_dual_perfect(V, B),
        ("candidate block at " + stray.to_string() + " sits at a zero weight space").c_str(),
        NotABasis);
  }

  SUBCASE("space validation") {
    CHECK_THROWS_WITH_AS(
        PreDualPerfectSpace<Rational>::make(d, {}, {{g0, 1}}, {}),
        "a graded space needs at least one top weight", InvalidDatum);
    CHECK_THROWS_WITH_AS(
        PreDualPerfectSpace<Rational>::make(d, {g0}, {{g1, 0}}, {}),
        ("weight space with nonpositive dimension at " + g1.to_string()).c_str(), InvalidDatum);
    const Weight above = g0 + d.simple_root(0);
    CHECK_THROWS_WITH_AS(
        PreDualPerfectSpace<Rational>::make(d, {g0}, {{above, 1}}, {}),
        ("weight " + above.to_string() + " is not below any top weight").c_str(), InvalidDatum);
    std::map<std::pair<int, Weight>, Mat<Rational>> bad_index;
    bad_index[{1, g0}] = rmat(0, 1, {});
    CHECK_THROWS_WITH_AS(
        PreDualPerfectSpace<Rational>::make(d, {g0}, {{g0, 1}}, bad_index),
        "lowering map with an index out of range", InvalidDatum);
    std::map<std::pair<int, Weight>, Mat<Rational>> bad_shape;
    bad_shape[{0, g0}] = rmat(2, 2, {1, 0, 0, 1});
    CHECK_THROWS_WITH_AS(
        PreDualPerfectSpace<Rational>::make(d, {g0}, {{g0, 1}, {g1, 2}}, bad_shape),
        ("lowering map at " + g0.to_string() + " has the wrong shape").c_str(), InvalidDatum);
  }

  SUBCASE("power bound must be positive") {
    auto out = verify_dual_perfect(V, two_string_basis(d));
    REQUIRE(out.accepted);
    CHECK_THROWS_WITH_AS(companion_power_suite(V, two_string_basis(d), out.certificate, 0),
                         "power bound must be positive", InvalidDatum);
  }
}

namespace {

struct CorpusEntry {
  std::string name;
  ModelOps ops;
};

void check_corpus_entry(const ModelOps& M) {
  const CartanDatum& d = *M.datum;
  GeneratedCrystal G = generate_crystal(M);
  GlobalBasis GB = solve_global_basis(M, G);
  PreDualPerfectSpace<Scalar> V = space_from_model(M);
  GlobalGradedBasis B = basis_from_global(M, G, GB.vectors);

  auto out = verify_dual_perfect(V, B.basis);
  REQUIRE(out.accepted);
  const auto& C = out.certificate;
  REQUIRE(C.size() == G.crystal.size());

  // The extracted graph is a crystal, isomorphic in both directions to the
  // one generated by the string-shifting operators.
  AbstractCrystal X = extract_graph(d, C);
  CHECK(check_crystal_axioms(d, X).passed);
  CHECK(check_isomorphism(d, X, G.crystal, B.node_of).passed);
  std::vector<int> inv(B.node_of.size(), -1);
  for (int k = 0; k < static_cast<int>(B.node_of.size()); ++k) inv[B.node_of[k]] = k;
  CHECK(check_isomorphism(d, G.crystal, X, inv).passed);

  for (int b = 0; b < C.size(); ++b) {
    const int g = B.node_of[b];
    for (int i = 0; i < d.size(); ++i) {
      // The filtration level equals the raising-walk length in the graph.
      int len = 0, cur = g;
      while (G.crystal.e_to[cur][i] != -1) {
        cur = G.crystal.e_to[cur][i];
        ++len;
      }
      CHECK(C.ell[b][i] == len);
      // Companion edges are the graph's lowering edges.
      const int ft = C.f_map[b][i] == -1 ? -1 : B.node_of[C.f_map[b][i]];
      CHECK(ft == G.crystal.f_to[g][i]);
      // Leading coefficients: a quantum integer on real edges, 1 on
      // imaginary ones.
      if (C.f_map[b][i] != -1) {
        const Scalar want =
            d.real(i) ? d.quantum_integer(i, 1 + *G.crystal.eps[g][i]) : Scalar(1);
        CHECK(C.coeff[b][i] == want);
      }
    }
  }

  CHECK(companion_power_suite(V, B.basis, C, 3).passed);
}

}  // namespace

TEST_CASE("global bases of modules and half-algebras are dual perfect") {
  SUBCASE("sl2 highest weight 2") {
    const CartanDatum d = sl2();
    HWModule m = HWModule::build(d, d.fundamental(0).scaled(2), 4);
    check_corpus_entry(module_ops(m));
  }
  SUBCASE("A2 first fundamental module") {
    const CartanDatum d = a2();
    HWModule m = HWModule::build(d, d.fundamental(0), 4);
    check_corpus_entry(module_ops(m));
  }
  SUBCASE("A2 adjoint module") {
    const CartanDatum d = a2();
    HWModule m = HWModule::build(d, d.fundamental(0) + d.fundamental(1), 5);
    check_corpus_entry(module_ops(m));
  }
  SUBCASE("imaginary tower module") {
    const CartanDatum d = im_zero();
    HWModule m = HWModule::build(d, d.fundamental(0), 3);
    check_corpus_entry(module_ops(m));
  }
  SUBCASE("sl2 half-algebra") {
    const CartanDatum d = sl2();
    HalfAlgebra h = HalfAlgebra::build(d, 6);
    check_corpus_entry(halfalg_ops(h));
  }
  SUBCASE("A2 half-algebra") {
    const CartanDatum d = a2();
    HalfAlgebra h = HalfAlgebra::build(d, 3);
    check_corpus_entry(halfalg_ops(h));
  }
}

TEST_CASE("sl2 module certificate numbers") {
  const CartanDatum d = sl2();
  HWModule m = HWModule::build(d, d.fundamental(0).scaled(2), 4);
  ModelOps M = module_ops(m);
  GeneratedCrystal G = generate_crystal(M);
  GlobalBasis GB = solve_global_basis(M, G);
  PreDualPerfectSpace<Scalar> V = space_from_model(M);
  GlobalGradedBasis B = basis_from_global(M, G, GB.vectors);
  REQUIRE((B.node_of == std::vector<int>{2, 1, 0}));

  auto out = verify_dual_perfect(V, B.basis);
  REQUIRE(out.accepted);
  const auto& C = out.certificate;
  REQUIRE(C.size() == 3);
  CHECK(C.ell[0][0] == 2);
  CHECK(C.ell[1][0] == 1);
  CHECK(C.ell[2][0] == 0);
  CHECK(C.f_map[2][0] == 1);
  CHECK(C.f_map[1][0] == 0);
  CHECK(C.f_map[0][0] == -1);
  CHECK(C.coeff[2][0] == Scalar(1));
  CHECK(C.coeff[1][0] == d.quantum_integer(0, 2));
  CHECK(C.coeff[0][0] == Scalar(0));
}

TEST_CASE("rescaling a basis vector changes nothing the field can see") {
  const CartanDatum d = sl2();
  HWModule m = HWModule::build(d, d.fundamental(0).scaled(2), 4);
  ModelOps M = module_ops(m);
  GeneratedCrystal G = generate_crystal(M);
  GlobalBasis GB = solve_global_basis(M, G);
  PreDualPerfectSpace<Scalar> V = space_from_model(M);
  GlobalGradedBasis B = basis_from_global(M, G, GB.vectors);
  auto base = verify_dual_perfect(V, B.basis);
  REQUIRE(base.accepted);

  const Weight mid = d.fundamental(0).scaled(2) - d.simple_root(0);
  // Units of the Laurent ring, and a scalar that is only a unit of the field:
  // the verdict and the graph are identical either way, only the stored
  // coefficients rescale.
  for (const Scalar& u : {Scalar::q(3), Scalar(-1) * Scalar::q(-1), Scalar(1) + Scalar::q(1)}) {
    GradedBasis<Scalar> scaled = B.basis;
    scaled[mid] = MatQq(scaled[mid] * u);
    auto out = verify_dual_perfect(V, scaled);
    REQUIRE(out.accepted);
    CHECK(out.certificate.ell == base.certificate.ell);
    CHECK(out.certificate.f_map == base.certificate.f_map);
    CHECK(out.certificate.e_map == base.certificate.e_map);
    // Edge into the rescaled vector divides by u, edge out multiplies by u.
    CHECK(out.certificate.coeff[2][0] == base.certificate.coeff[2][0] / u);
    CHECK(out.certificate.coeff[1][0] == base.certificate.coeff[1][0] * u);
    AbstractCrystal X = extract_graph(d, out.certificate);
    std::vector<int> identity(static_cast<std::size_t>(X.size()));
    for (int k = 0; k < X.size(); ++k) identity[static_cast<std::size_t>(k)] = k;
    CHECK(check_isomorphism(d, X, extract_graph(d, base.certificate), identity).passed);
    CHECK(companion_power_suite(V, scaled, out.certificate, 3).passed);
  }
}

TEST_CASE("the power suite rejects corrupted certificates") {
  const CartanDatum d = sl2();
  HWModule m = HWModule::build(d, d.fundamental(0).scaled(2), 4);
  ModelOps M = module_ops(m);
  GeneratedCrystal G = generate_crystal(M);
  GlobalBasis GB = solve_global_basis(M, G);
  PreDualPerfectSpace<Scalar> V = space_from_model(M);
  GlobalGradedBasis B = basis_from_global(M, G, GB.vectors);
  auto out = verify_dual_perfect(V, B.basis);
  REQUIRE(out.accepted);

  SUBCASE("tampered filtration level") {
    auto C = out.certificate;
    C.ell[1][0] = 2;
    auto rep = companion_power_suite(V, B.basis, C, 3);
    CHECK_FALSE(rep.passed);
    CHECK(mentions(rep.violations, "filtration level differs from the companion preimage count"));
  }
  SUBCASE("tampered companion edge") {
    auto C = out.certificate;
    C.f_map[2][0] = 0;  // skips a level
    auto rep = companion_power_suite(V, B.basis, C, 3);
    CHECK_FALSE(rep.passed);
    CHECK(mentions(rep.violations, "companion image does not raise the filtration level by one"));
  }
  SUBCASE("dropped companion edge") {
    auto C = out.certificate;
    C.f_map[2][0] = -1;
    C.e_map[1][0] = -1;
    auto rep = companion_power_suite(V, B.basis, C, 3);
    CHECK_FALSE(rep.passed);
    CHECK(mentions(rep.violations, "misses the deep filtration level"));
  }
}
