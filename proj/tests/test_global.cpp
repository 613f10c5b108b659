#include "doctest.h"
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

CartanDatum sl2() { return CartanDatum::make(mat({{2}}), {1}); }
CartanDatum a2() { return CartanDatum::make(mat({{2, -1}, {-1, 2}}), {1, 1}); }
CartanDatum b2() { return CartanDatum::make(mat({{2, -2}, {-1, 2}}), {1, 2}); }
CartanDatum im_zero() { return CartanDatum::make(mat({{0}}), {1}); }
CartanDatum im_neg() { return CartanDatum::make(mat({{-2}}), {1}); }

VecQq vec1(const Scalar& a) {
  VecQq v(1);
  v(0) = a;
  return v;
}

VecQq vec2(const Scalar& a, const Scalar& b) {
  VecQq v(2);
  v(0) = a;
  v(1) = b;
  return v;
}

bool mentions(const std::vector<std::string>& msgs, const std::string& needle) {
  for (const auto& s : msgs)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

// The three defining properties, asserted directly for every node: fixed by
// the bar involution, inside the integral form, and congruent to the node's
// residue at q = 0 over the lattice generators.
void check_defining_properties(const GeneratedCrystal& G, const GlobalBasis& GB) {
  for (int b = 0; b < G.crystal.size(); ++b) {
    const auto sb = static_cast<std::size_t>(b);
    const Content& beta = G.lattice.node_content[sb];
    const VecQq& g = GB.vectors[sb];
    CHECK((bar(g) == g));
    CHECK(GB.integral.at(beta).member(g));
    CHECK((lattice_residue(G.lattice, beta, g) == G.lattice.node_residue[sb]));
  }
}

}  // namespace

TEST_CASE("divided monomials normalize runs of equal real letters by quantum factorials") {
  SUBCASE("a pure power of one real letter is divided by the full factorial") {
    auto d = sl2();
    HWModule V = HWModule::build(d, d.fundamental(0).scaled(4), 4);
    ModelOps M = module_ops(V);
    CHECK(divided_monomial(M, Content{2}, Word{0, 0})(0) == d.quantum_factorial(0, 2).inverse());
    CHECK(divided_monomial(M, Content{3}, Word{0, 0, 0})(0) == d.quantum_factorial(0, 3).inverse());
  }
  SUBCASE("runs of length one carry no normalization") {
    auto d = a2();
    HalfAlgebra H = HalfAlgebra::build(d, 2);
    ModelOps M = halfalg_ops(H);
    const Word w{0, 1};
    CHECK((divided_monomial(M, Content{1, 1}, w) == M.expand_word(Content{1, 1}, w)));
  }
  SUBCASE("each maximal run contributes its own factorial") {
    auto d = a2();
    HalfAlgebra H = HalfAlgebra::build(d, 3);
    ModelOps M = halfalg_ops(H);
    const Word w{0, 0, 1};
    const VecQq expanded = M.expand_word(Content{2, 1}, w);
    CHECK((divided_monomial(M, Content{2, 1}, w) ==
           VecQq(expanded * d.quantum_factorial(0, 2).inverse())));
  }
  SUBCASE("the factorial uses the symmetrized powers of q") {
    auto d = b2();
    CHECK(d.quantum_factorial(1, 2) == Scalar::q(2) + Scalar::q(-2));
    HalfAlgebra H = HalfAlgebra::build(d, 2);
    ModelOps M = halfalg_ops(H);
    const Word w{1, 1};
    const VecQq expanded = M.expand_word(Content{0, 2}, w);
    CHECK((divided_monomial(M, Content{0, 2}, w) ==
           VecQq(expanded * d.quantum_factorial(1, 2).inverse())));
  }
  SUBCASE("imaginary letters are never divided") {
    auto d = im_zero();
    HalfAlgebra H = HalfAlgebra::build(d, 3);
    ModelOps M = halfalg_ops(H);
    const Word w{0, 0, 0};
    CHECK((divided_monomial(M, Content{3}, w) == M.expand_word(Content{3}, w)));
  }
}

TEST_CASE("the integral form accepts Laurent combinations of divided monomials and rejects others") {
  auto d = sl2();
  HWModule V = HWModule::build(d, d.fundamental(0).scaled(2), 4);
  ModelOps M = module_ops(V);
  const Scalar half = d.quantum_factorial(0, 2).inverse();

  IntegralSpan span = integral_basis(M, Content{2});
  CHECK(span.member(vec1(half)));                        // the divided square itself
  CHECK(span.member(vec1(Scalar(1))));                   // the plain square
  CHECK(span.member(vec1(half * Scalar::q(-3))));        // Laurent multiples stay inside
  CHECK(span.member(VecQq::Zero(1)));
  CHECK_FALSE(span.member(vec1(half * half)));           // a second factorial is too deep
  CHECK_FALSE(span.member(vec1(Scalar(1) / (Scalar(1) - Scalar::q(1)))));

  auto da = a2();
  HWModule Va = HWModule::build(da, da.fundamental(0) + da.fundamental(1), 4);
  ModelOps Ma = module_ops(Va);
  IntegralSpan span2 = integral_basis(Ma, Content{1, 1});
  CHECK(span2.member(vec2(Scalar(1), Scalar::q(5))));
  CHECK_FALSE(span2.member(vec2(Scalar(0), da.quantum_factorial(0, 2).inverse())));
}

TEST_CASE("rank-one strings solve to the divided lowering powers of the highest vector") {
  auto d = sl2();
  HWModule V = HWModule::build(d, d.fundamental(0).scaled(4), 5);
  ModelOps M = module_ops(V);
  GeneratedCrystal G = generate_crystal(M);
  GlobalBasis GB = solve_global_basis(M, G);

  REQUIRE(G.crystal.size() == 5);
  for (int k = 0; k <= 4; ++k) {
    REQUIRE((G.lattice.node_content[static_cast<std::size_t>(k)] ==
             Content{static_cast<std::int64_t>(k)}));
    CHECK(GB.vectors[static_cast<std::size_t>(k)](0) == d.quantum_factorial(0, k).inverse());
  }
  check_defining_properties(G, GB);
}

TEST_CASE("zero-weight nodes of the adjoint module solve to the two lowering products") {
  auto d = a2();
  HWModule V = HWModule::build(d, d.fundamental(0) + d.fundamental(1), 5);
  ModelOps M = module_ops(V);
  GeneratedCrystal G = generate_crystal(M);
  GlobalBasis GB = solve_global_basis(M, G);

  REQUIRE(G.crystal.size() == 8);
  REQUIRE((G.lattice.node_content[3] == Content{1, 1}));
  REQUIRE((G.lattice.node_content[4] == Content{1, 1}));
  REQUIRE((G.lattice.node_content[5] == Content{1, 2}));
  REQUIRE((G.lattice.node_content[6] == Content{2, 1}));
  REQUIRE((G.lattice.node_content[7] == Content{2, 2}));

  // At the two-dimensional zero weight the basis is exactly the two monomial
  // products of the simple lowerings; the deeper one-dimensional weights get
  // the divided monomials.
  CHECK((GB.vectors[3] == vec2(Scalar(0), Scalar(1))));
  CHECK((GB.vectors[4] == vec2(Scalar(1), Scalar(0))));
  CHECK((GB.vectors[5] == vec1(Scalar(1))));
  CHECK(GB.vectors[6](0) == d.quantum_factorial(0, 2).inverse());
  CHECK((GB.vectors[7] == vec1(Scalar(1))));
  check_defining_properties(G, GB);
}

TEST_CASE("half-algebra basis at depth three matches the frozen coordinates") {
  auto d = a2();
  HalfAlgebra H = HalfAlgebra::build(d, 3);
  ModelOps M = halfalg_ops(H);
  GeneratedCrystal G = generate_crystal(M);
  GlobalBasis GB = solve_global_basis(M, G);
  const Scalar half = d.quantum_factorial(0, 2).inverse();
  const Scalar sixth = d.quantum_factorial(0, 3).inverse();

  REQUIRE(G.crystal.size() == 13);
  REQUIRE((G.lattice.node_content[3] == Content{2, 0}));
  REQUIRE((G.lattice.node_content[4] == Content{1, 1}));
  REQUIRE((G.lattice.node_content[5] == Content{1, 1}));
  REQUIRE((G.lattice.node_content[6] == Content{0, 2}));
  REQUIRE((G.lattice.node_content[7] == Content{3, 0}));
  REQUIRE((G.lattice.node_content[8] == Content{2, 1}));
  REQUIRE((G.lattice.node_content[10] == Content{2, 1}));
  REQUIRE((G.lattice.node_content[12] == Content{0, 3}));

  CHECK((GB.vectors[3] == vec1(half)));
  CHECK((GB.vectors[4] == vec2(Scalar(0), Scalar(1))));
  CHECK((GB.vectors[5] == vec2(Scalar(1), Scalar(0))));
  CHECK((GB.vectors[6] == vec1(half)));
  CHECK((GB.vectors[7] == vec1(sixth)));
  CHECK((GB.vectors[8] == vec2(Scalar(0) - half, Scalar(1))));
  CHECK((GB.vectors[10] == vec2(half, Scalar(0))));
  CHECK((GB.vectors[12] == vec1(sixth)));
  check_defining_properties(G, GB);
}

TEST_CASE("defining properties and invariants hold across the corpus") {
  struct ModuleCase {
    CartanDatum d;
    Weight lambda;
    int depth;
  };
  auto ds = sl2();
  auto da = a2();
  auto db = b2();
  auto di = im_zero();
  std::vector<ModuleCase> modules;
  modules.push_back({ds, ds.fundamental(0).scaled(2), 4});
  modules.push_back({da, da.fundamental(0) + da.fundamental(1), 5});
  modules.push_back({db, db.fundamental(0), 4});
  modules.push_back({di, di.fundamental(0), 3});

  for (const auto& mc : modules) {
    HWModule V = HWModule::build(mc.d, mc.lambda, mc.depth);
    ModelOps M = module_ops(V);
    GeneratedCrystal G = generate_crystal(M);
    GlobalBasis GB = solve_global_basis(M, G);
    check_defining_properties(G, GB);
    auto rep = check_global_invariants(M, G, GB);
    CHECK(rep.passed);
    for (const auto& v : rep.violations) MESSAGE(v);
    for (int i = 0; i < mc.d.size(); ++i) {
      CHECK(check_expansion(M, G, GB, i).passed);
      for (std::int64_t n = 0; n <= 2; ++n) CHECK(check_filtration(M, G, GB, i, n).passed);
    }
  }

  struct HalfCase {
    CartanDatum d;
    int depth;
  };
  auto dn = im_neg();
  std::vector<HalfCase> halves;
  halves.push_back({ds, 6});
  halves.push_back({da, 3});
  halves.push_back({dn, 3});

  for (const auto& hc : halves) {
    HalfAlgebra H = HalfAlgebra::build(hc.d, hc.depth);
    ModelOps M = halfalg_ops(H);
    GeneratedCrystal G = generate_crystal(M);
    GlobalBasis GB = solve_global_basis(M, G);
    check_defining_properties(G, GB);
    auto rep = check_global_invariants(M, G, GB);
    CHECK(rep.passed);
    for (const auto& v : rep.violations) MESSAGE(v);
    for (int i = 0; i < hc.d.size(); ++i) {
      CHECK(check_expansion(M, G, GB, i).passed);
      for (std::int64_t n = 0; n <= 2; ++n) CHECK(check_filtration(M, G, GB, i, n).passed);
    }
  }
}

TEST_CASE("lowering a basis vector expands with quantum-integer leading coefficient") {
  SUBCASE("one real string: each step multiplies by the next quantum integer") {
    auto d = sl2();
    HWModule V = HWModule::build(d, d.fundamental(0).scaled(4), 5);
    ModelOps M = module_ops(V);
    GeneratedCrystal G = generate_crystal(M);
    GlobalBasis GB = solve_global_basis(M, G);
    auto rep = check_expansion(M, G, GB, 0);
    CHECK(rep.passed);
    CHECK(rep.corrections.empty());
    for (int k = 0; k <= 3; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      const VecQq lowered = VecQq(M.lower(0, G.lattice.node_content[sk]) * GB.vectors[sk]);
      CHECK((lowered == VecQq(GB.vectors[sk + 1] * d.quantum_integer(0, k + 1))));
    }
  }
  SUBCASE("one imaginary tower: lowering reproduces the next vector exactly") {
    auto d = im_zero();
    HWModule V = HWModule::build(d, d.fundamental(0), 3);
    ModelOps M = module_ops(V);
    GeneratedCrystal G = generate_crystal(M);
    GlobalBasis GB = solve_global_basis(M, G);
    auto rep = check_expansion(M, G, GB, 0);
    CHECK(rep.passed);
    CHECK(rep.corrections.empty());
    for (int k = 0; k <= 1; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      const VecQq lowered = VecQq(M.lower(0, G.lattice.node_content[sk]) * GB.vectors[sk]);
      CHECK((lowered == GB.vectors[sk + 1]));
    }
  }
}

TEST_CASE("expansion corrections land strictly deeper in the strings") {
  SUBCASE("adjoint module: one correction per index, with coefficient one") {
    auto d = a2();
    HWModule V = HWModule::build(d, d.fundamental(0) + d.fundamental(1), 5);
    ModelOps M = module_ops(V);
    GeneratedCrystal G = generate_crystal(M);
    GlobalBasis GB = solve_global_basis(M, G);

    auto rep0 = check_expansion(M, G, GB, 0);
    CHECK(rep0.passed);
    REQUIRE(rep0.corrections.size() == 1);
    CHECK(rep0.corrections[0].src == 3);
    CHECK(rep0.corrections[0].dst == 6);
    CHECK(rep0.corrections[0].coeff == Scalar(1));

    auto rep1 = check_expansion(M, G, GB, 1);
    CHECK(rep1.passed);
    REQUIRE(rep1.corrections.size() == 1);
    CHECK(rep1.corrections[0].src == 4);
    CHECK(rep1.corrections[0].dst == 5);
    CHECK(rep1.corrections[0].coeff == Scalar(1));
  }
  SUBCASE("half algebra: the mixed products pick up one correction per index") {
    auto d = a2();
    HalfAlgebra H = HalfAlgebra::build(d, 3);
    ModelOps M = halfalg_ops(H);
    GeneratedCrystal G = generate_crystal(M);
    GlobalBasis GB = solve_global_basis(M, G);

    auto rep0 = check_expansion(M, G, GB, 0);
    CHECK(rep0.passed);
    REQUIRE(rep0.corrections.size() == 1);
    CHECK(rep0.corrections[0].src == 4);
    CHECK(rep0.corrections[0].dst == 10);
    CHECK(rep0.corrections[0].coeff == Scalar(1));

    auto rep1 = check_expansion(M, G, GB, 1);
    CHECK(rep1.passed);
    REQUIRE(rep1.corrections.size() == 1);
    CHECK(rep1.corrections[0].src == 5);
    CHECK(rep1.corrections[0].dst == 9);
    CHECK(rep1.corrections[0].coeff == Scalar(1));
  }
}

TEST_CASE("divided-power filtration levels match the string-position spans") {
  auto d = sl2();
  HWModule V = HWModule::build(d, d.fundamental(0).scaled(2), 4);
  ModelOps M = module_ops(V);
  GeneratedCrystal G = generate_crystal(M);
  GlobalBasis GB = solve_global_basis(M, G);
  for (std::int64_t n = 0; n <= 3; ++n) CHECK(check_filtration(M, G, GB, 0, n).passed);
  CHECK_THROWS_AS(check_filtration(M, G, GB, 0, -1), InvalidDatum);

  // The imaginary towers use the raising-walk selection: the recorded string
  // positions are zero on every node, yet the levels still match.
  auto di = im_neg();
  HalfAlgebra Hi = HalfAlgebra::build(di, 3);
  ModelOps Mi = halfalg_ops(Hi);
  GeneratedCrystal Gi = generate_crystal(Mi);
  GlobalBasis GBi = solve_global_basis(Mi, Gi);
  for (int b = 0; b < Gi.crystal.size(); ++b)
    CHECK(Gi.crystal.eps[static_cast<std::size_t>(b)][0] == ExtInt(0));
  for (std::int64_t n = 0; n <= 3; ++n) CHECK(check_filtration(Mi, Gi, GBi, 0, n).passed);
}

TEST_CASE("corrupted bases are rejected by the invariant and filtration checkers") {
  auto d = a2();
  HWModule V = HWModule::build(d, d.fundamental(0) + d.fundamental(1), 5);
  ModelOps M = module_ops(V);
  GeneratedCrystal G = generate_crystal(M);
  GlobalBasis GB = solve_global_basis(M, G);

  SUBCASE("scaling one vector by q breaks bar symmetry and the congruence") {
    GlobalBasis bad = GB;
    bad.vectors[6] = VecQq(bad.vectors[6] * Scalar::q(1));
    auto rep = check_global_invariants(M, G, bad);
    CHECK_FALSE(rep.passed);
    CHECK(mentions(rep.violations, "not fixed by the bar involution"));
    CHECK(mentions(rep.violations, "not congruent to its node"));
    CHECK(mentions(rep.violations, "non-polynomial correction"));
    CHECK(rep.violations.size() == 3);
  }
  SUBCASE("scaling by a non-unit shrinks the span and fails the filtration") {
    // Multiplying by q alone changes nothing the filtration can see, since q
    // is invertible in the Laurent ring; 1 + q is not.
    GlobalBasis bad = GB;
    bad.vectors[6] = VecQq(bad.vectors[6] * (Scalar(1) + Scalar::q(1)));
    CHECK_FALSE(check_filtration(M, G, bad, 0, 0).passed);
  }
  SUBCASE("duplicating a vector destroys the basis property of its weight space") {
    GlobalBasis bad = GB;
    bad.vectors[3] = bad.vectors[4];
    auto rep = check_global_invariants(M, G, bad);
    CHECK_FALSE(rep.passed);
    CHECK(mentions(rep.violations, "do not form a basis"));
  }
  SUBCASE("a vector outside the integral form is flagged") {
    GlobalBasis bad = GB;
    bad.vectors[7] = VecQq(bad.vectors[7] * d.quantum_factorial(0, 2).inverse());
    auto rep = check_global_invariants(M, G, bad);
    CHECK_FALSE(rep.passed);
    CHECK(mentions(rep.violations, "outside the integral form"));
  }
  SUBCASE("a wrong leading coefficient is caught by the expansion checker") {
    GlobalBasis bad = GB;
    bad.vectors[6] = VecQq(bad.vectors[6] * Scalar::q(1));
    auto rep = check_expansion(M, G, bad, 0);
    CHECK_FALSE(rep.passed);
    CHECK(mentions(rep.violations, "leading coefficient at the edge target"));
  }
}

TEST_CASE("the solver reports premise failures as non-convergence") {
  auto d = a2();
  HWModule V = HWModule::build(d, d.fundamental(0) + d.fundamental(1), 5);
  ModelOps M = module_ops(V);
  GeneratedCrystal G = generate_crystal(M);

  SUBCASE("a string position longer than the raising walk") {
    GeneratedCrystal bad = G;
    bad.crystal.eps[6][0] = ExtInt(5);
    CHECK_THROWS_WITH_AS(solve_global_basis(M, bad),
                         "string position exceeds the raising walk at (2,1)", NoConvergence);
  }
  SUBCASE("a raising edge whose recorded string position is zero") {
    GeneratedCrystal bad = G;
    bad.crystal.eps[6][0] = ExtInt(0);
    CHECK_THROWS_WITH_AS(solve_global_basis(M, bad),
                         "raising edge with zero string position at (2,1)", NoConvergence);
  }
  SUBCASE("a node with no raising edge at all") {
    GeneratedCrystal bad = G;
    bad.crystal.e_to[3][0] = -1;
    bad.crystal.e_to[3][1] = -1;
    CHECK_THROWS_WITH_AS(solve_global_basis(M, bad), "node without a raising edge at (1,1)",
                         NoConvergence);
  }
  SUBCASE("a node residue that is not a lattice generator") {
    GeneratedCrystal bad = G;
    bad.lattice.node_residue[3] = {Rational(2)};
    CHECK_THROWS_WITH_AS(solve_global_basis(M, bad),
                         "node residue is not a lattice generator at (1,1)", NoConvergence);
  }
}
