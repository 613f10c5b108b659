#include "qgkm/strings.hpp"

#include <algorithm>
#include <cstddef>
#include <set>
#include <utility>

#include "qgkm/errors.hpp"

namespace qgkm {

GoodSequence GoodSequence::cyclic(int index_count) {
  std::vector<int> block(static_cast<std::size_t>(index_count));
  for (int i = 0; i < index_count; ++i) block[static_cast<std::size_t>(i)] = i;
  return make({}, std::move(block), index_count);
}

GoodSequence GoodSequence::make(std::vector<int> prefix, std::vector<int> block,
                                int index_count) {
  if (block.empty()) throw BadSequence("sequence needs a nonempty repeating block");
  std::vector<bool> seen(static_cast<std::size_t>(index_count), false);
  for (int i : prefix)
    if (i < 0 || i >= index_count) throw BadSequence("sequence prefix index out of range");
  for (int i : block) {
    if (i < 0 || i >= index_count) throw BadSequence("sequence block index out of range");
    seen[static_cast<std::size_t>(i)] = true;
  }
  for (int i = 0; i < index_count; ++i)
    if (!seen[static_cast<std::size_t>(i)])
      throw BadSequence("sequence block misses index " + std::to_string(i));
  return GoodSequence{std::move(prefix), std::move(block)};
}

int GoodSequence::at(std::int64_t k) const {
  if (k < static_cast<std::int64_t>(prefix.size())) return prefix[static_cast<std::size_t>(k)];
  const std::int64_t j = (k - static_cast<std::int64_t>(prefix.size())) %
                         static_cast<std::int64_t>(block.size());
  return block[static_cast<std::size_t>(j)];
}

StringDatum StringDatum::of(std::vector<std::int64_t> values) {
  for (std::int64_t v : values)
    if (v < 0) throw BadSequence("string datum entry is negative");
  while (!values.empty() && values.back() == 0) values.pop_back();
  return StringDatum{std::move(values)};
}

std::int64_t StringDatum::at(std::int64_t k) const {
  if (k < 0 || k >= static_cast<std::int64_t>(values.size())) return 0;
  return values[static_cast<std::size_t>(k)];
}

std::string StringDatum::to_string() const {
  std::string out = "(";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(values[k]);
  }
  return out + ")";
}

bool lex_less(const StringDatum& a, const StringDatum& b) {
  const std::int64_t n =
      static_cast<std::int64_t>(std::max(a.values.size(), b.values.size()));
  for (std::int64_t k = 0; k < n; ++k) {
    if (a.at(k) != b.at(k)) return a.at(k) < b.at(k);
  }
  return false;
}

bool lex_leq(const StringDatum& a, const StringDatum& b) { return !lex_less(b, a); }

template <typename K>
int top_of_string(int i, int b, const DualPerfectCertificate<K>& cert) {
  const std::int64_t steps = cert.ell[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
  int cur = b;
  for (std::int64_t s = 0; s < steps; ++s) {
    cur = cert.e_map[static_cast<std::size_t>(cur)][static_cast<std::size_t>(i)];
    if (cur == -1)
      throw InvalidDatum("raising chain shorter than the recorded level at node " +
                         std::to_string(b) + ", index " + std::to_string(i));
  }
  return cur;
}

namespace {

template <typename K>
bool is_head(const DualPerfectCertificate<K>& cert, int b) {
  for (std::int64_t l : cert.ell[static_cast<std::size_t>(b)])
    if (l != 0) return false;
  return true;
}

}  // namespace

template <typename K>
std::vector<int> head_nodes(const DualPerfectCertificate<K>& cert) {
  std::vector<int> out;
  for (int b = 0; b < cert.size(); ++b)
    if (is_head(cert, b)) out.push_back(b);
  return out;
}

template <typename K>
StringWalk string_datum_walk(const GoodSequence& ib, int b,
                             const DualPerfectCertificate<K>& cert) {
  // Every full pass over the block either raises (strictly ascending chain of
  // nodes, so at most cert.size() raises happen overall) or certifies that
  // all levels vanish.
  const std::int64_t bound =
      static_cast<std::int64_t>(ib.prefix.size()) +
      static_cast<std::int64_t>(ib.block.size()) * (cert.size() + 2);
  std::vector<std::int64_t> values;
  int cur = b;
  std::int64_t k = 0;
  while (!is_head(cert, cur)) {
    if (k >= bound)
      throw NoConvergence("string-datum walk from node " + std::to_string(b) +
                          " exceeds the certificate bound");
    const int i = ib.at(k);
    const std::int64_t l =
        cert.ell[static_cast<std::size_t>(cur)][static_cast<std::size_t>(i)];
    values.push_back(l);
    cur = top_of_string(i, cur, cert);
    ++k;
  }
  return StringWalk{StringDatum::of(std::move(values)), cur};
}

template <typename K>
std::vector<StringWalk> all_string_data(const GoodSequence& ib,
                                        const DualPerfectCertificate<K>& cert) {
  std::vector<StringWalk> out;
  out.reserve(static_cast<std::size_t>(cert.size()));
  for (int b = 0; b < cert.size(); ++b) out.push_back(string_datum_walk(ib, b, cert));
  return out;
}

namespace {

// Keep one independent column set per weight.
template <typename K>
GradedSpan<K> compress(const GradedSpan<K>& S) {
  GradedSpan<K> out;
  for (const auto& [mu, cols] : S) {
    ColumnSpan<K> span(cols);
    if (span.rank() > 0) out.emplace(mu, span.basis());
  }
  return out;
}

template <typename K>
void add_cols(GradedSpan<K>& S, const Weight& mu, const Mat<K>& cols) {
  if (cols.cols() == 0 || cols.rows() == 0) return;
  auto it = S.find(mu);
  if (it == S.end()) {
    S.emplace(mu, cols);
  } else {
    it->second = hstack<K>({it->second, cols}, it->second.rows());
  }
}

template <typename K>
GradedSpan<K> full_space(const PreDualPerfectSpace<K>& V) {
  GradedSpan<K> S;
  for (const auto& [mu, n] : V.dims) {
    Mat<K> id(n, n);
    id.setZero();
    for (int k = 0; k < n; ++k) id(k, k) = K(1);
    S.emplace(mu, std::move(id));
  }
  return S;
}

// One application of f_i to a graded span.
template <typename K>
GradedSpan<K> lower_span(const PreDualPerfectSpace<K>& V, int i, const GradedSpan<K>& S) {
  GradedSpan<K> T;
  for (const auto& [mu, cols] : S) {
    const Weight tgt = mu - V.datum.simple_root(i);
    if (V.dim(tgt) == 0) continue;
    add_cols(T, tgt, Mat<K>(V.f(i, mu) * cols));
  }
  return compress(T);
}

// Image of f_{i_1}^{a_1} ... f_{i_m}^{a_m} (rightmost factor first) on the
// whole space.
template <typename K>
GradedSpan<K> word_image(const PreDualPerfectSpace<K>& V,
                         const std::vector<std::pair<int, std::int64_t>>& factors) {
  GradedSpan<K> S = full_space(V);
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    for (std::int64_t t = 0; t < it->second && !S.empty(); ++t)
      S = lower_span(V, it->first, S);
  }
  return S;
}

// Apply the same word to a single vector; returns the final weight and the
// image (size 0 once a zero weight space is crossed).
template <typename K>
std::pair<Weight, Vec<K>> word_on_vector(const PreDualPerfectSpace<K>& V,
                                         const std::vector<std::pair<int, std::int64_t>>& factors,
                                         Weight mu, Vec<K> v) {
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    for (std::int64_t t = 0; t < it->second; ++t) {
      const Weight tgt = mu - V.datum.simple_root(it->first);
      v = Vec<K>(V.f(it->first, mu) * v);
      mu = tgt;
    }
  }
  return {mu, std::move(v)};
}

// Stabilization length: beyond the support and the prefix, one full block
// pass makes the incremented terms range over every index.
std::int64_t stable_length(const GoodSequence& ib, const StringDatum& L) {
  return std::max<std::int64_t>(static_cast<std::int64_t>(L.values.size()),
                                static_cast<std::int64_t>(ib.prefix.size())) +
         static_cast<std::int64_t>(ib.block.size());
}

// Factors (i_1, l_1) .. (i_m, l_m), with the k-th exponent incremented when
// increment_at = k (1-based), skipping zero exponents.
std::vector<std::pair<int, std::int64_t>> word_factors(const GoodSequence& ib,
                                                       const StringDatum& L, std::int64_t m,
                                                       std::int64_t increment_at) {
  std::vector<std::pair<int, std::int64_t>> factors;
  for (std::int64_t k = 1; k <= m; ++k) {
    std::int64_t a = L.at(k - 1) + (k == increment_at ? 1 : 0);
    if (a > 0) factors.emplace_back(ib.at(k - 1), a);
  }
  return factors;
}

}  // namespace

template <typename K>
GradedSpan<K> lowered_sum(const PreDualPerfectSpace<K>& V) {
  GradedSpan<K> S;
  for (const auto& [mu, n] : V.dims) {
    for (int i = 0; i < V.datum.size(); ++i) {
      const Weight tgt = mu - V.datum.simple_root(i);
      if (V.dim(tgt) == 0) continue;
      add_cols(S, tgt, V.f(i, mu));
    }
  }
  return compress(S);
}

template <typename K>
GradedSpan<K> subspace_gt(const PreDualPerfectSpace<K>& V, const GoodSequence& ib,
                          const StringDatum& L) {
  const std::int64_t m = stable_length(ib, L);
  GradedSpan<K> out;
  for (std::int64_t k = 1; k <= m; ++k) {
    for (const auto& [mu, cols] : word_image(V, word_factors(ib, L, k, k)))
      add_cols(out, mu, cols);
    out = compress(out);
  }
  return out;
}

template <typename K>
GradedSpan<K> subspace_geq(const PreDualPerfectSpace<K>& V, const GoodSequence& ib,
                           const StringDatum& L) {
  const std::int64_t m = stable_length(ib, L);
  GradedSpan<K> out = subspace_gt(V, ib, L);
  for (const auto& [mu, cols] : word_image(V, word_factors(ib, L, m, 0)))
    add_cols(out, mu, cols);
  return compress(out);
}

namespace {

template <typename K>
Mat<K> span_at(const GradedSpan<K>& S, const Weight& mu, int rows) {
  auto it = S.find(mu);
  if (it != S.end()) return it->second;
  Mat<K> empty(rows, 0);
  return empty;
}

template <typename K>
Vec<K> node_column(const GradedBasis<K>& B, const DualPerfectCertificate<K>& cert, int b) {
  return B.at(cert.wt[static_cast<std::size_t>(b)])
      .col(cert.col[static_cast<std::size_t>(b)]);
}

// v lies in span(S) at mu?
template <typename K>
bool in_span(const Mat<K>& S, const Vec<K>& v) {
  if (is_zero_vec(v)) return true;
  return LinearSolver<K>(S).contains(v);
}

// v and w are nonzero scalar multiples of each other modulo span(S)?
template <typename K>
bool proportional_mod(const Mat<K>& S, const Vec<K>& v, const Vec<K>& w) {
  if (in_span(S, v) || in_span(S, w)) return false;
  const Mat<K> sv = hstack<K>({S, Mat<K>(v)}, v.size());
  return LinearSolver<K>(sv).contains(w);
}

}  // namespace

template <typename K>
CrystalReport check_string_spans(const PreDualPerfectSpace<K>& V, const GradedBasis<K>& B,
                                 const DualPerfectCertificate<K>& cert, const GoodSequence& ib) {
  CrystalReport rep;
  auto fail = [&rep](std::string msg) {
    rep.passed = false;
    rep.violations.push_back(std::move(msg));
  };

  const std::vector<StringWalk> walks = all_string_data(ib, cert);
  std::set<StringDatum, StringDatumLess> realized;
  for (const auto& w : walks) realized.insert(w.datum);

  std::map<StringDatum, GradedSpan<K>, StringDatumLess> ge, gt;
  for (const StringDatum& L : realized) {
    ge.emplace(L, subspace_geq(V, ib, L));
    gt.emplace(L, subspace_gt(V, ib, L));
  }

  // Anti-monotone inclusions across realized data.
  for (const StringDatum& A : realized) {
    for (const StringDatum& C : realized) {
      if (!lex_less(A, C)) continue;
      for (const auto& [mu, n] : V.dims) {
        if (!subspace_leq<K>(span_at(ge.at(C), mu, n), span_at(ge.at(A), mu, n)))
          fail("subspace inclusion fails between data " + C.to_string() + " and " +
               A.to_string() + " at " + mu.to_string());
      }
    }
  }

  for (const StringDatum& L : realized) {
    const GradedSpan<K>& Sge = ge.at(L);
    const GradedSpan<K>& Sgt = gt.at(L);

    for (const auto& [mu, n] : V.dims) {
      const Mat<K> above = span_at(Sge, mu, n);
      const Mat<K> strict = span_at(Sgt, mu, n);
      std::vector<int> at_least, exact;
      auto nodes_it = cert.at.find(mu);
      if (nodes_it != cert.at.end()) {
        for (int b : nodes_it->second) {
          if (lex_leq(L, walks[static_cast<std::size_t>(b)].datum)) at_least.push_back(b);
          if (walks[static_cast<std::size_t>(b)].datum == L) exact.push_back(b);
        }
      }
      std::vector<int> strictly;
      for (int b : at_least)
        if (walks[static_cast<std::size_t>(b)].datum != L) strictly.push_back(b);

      auto cols_of = [&](const std::vector<int>& ids) {
        Mat<K> m(n, static_cast<Eigen::Index>(ids.size()));
        for (std::size_t t = 0; t < ids.size(); ++t)
          m.col(static_cast<Eigen::Index>(t)) = node_column(B, cert, ids[t]);
        return m;
      };
      const Mat<K> cols_ge = cols_of(at_least);
      const Mat<K> cols_gt = cols_of(strictly);

      if (!subspace_eq<K>(above, cols_ge))
        fail("the at-least subspace for datum " + L.to_string() + " at " + mu.to_string() +
             " differs from the span of its elements");
      if (!subspace_eq<K>(strict, cols_gt))
        fail("the strictly-above subspace for datum " + L.to_string() + " at " +
             mu.to_string() + " differs from the span of its elements");

      // Elements of this datum are a quotient basis between the two spans.
      const int r_gt = rank_of<K>(strict);
      const int r_ge = rank_of<K>(above);
      const Mat<K> joined = hstack<K>({strict, cols_of(exact)}, n);
      if (rank_of<K>(joined) != r_gt + static_cast<int>(exact.size()) ||
          r_ge != r_gt + static_cast<int>(exact.size()))
        fail("elements with datum " + L.to_string() + " are not a quotient basis at " +
             mu.to_string());
    }

    // Walks of distinct elements of one datum end on distinct heads.
    std::map<int, int> terminal_of;
    for (int b = 0; b < cert.size(); ++b) {
      if (walks[static_cast<std::size_t>(b)].datum != L) continue;
      auto [it, fresh] = terminal_of.try_emplace(walks[static_cast<std::size_t>(b)].terminal, b);
      if (!fresh)
        fail("two elements with datum " + L.to_string() + " walk to one head: nodes " +
             std::to_string(it->second) + " and " + std::to_string(b));
    }

    // Operator word vs companion word on each head, and exhaustion of the
    // quotient basis by the head images, all modulo the strictly-above span.
    const std::int64_t m = stable_length(ib, L);
    const auto factors = word_factors(ib, L, m, 0);
    std::vector<std::pair<Weight, Vec<K>>> head_images;
    std::vector<int> head_ids;
    for (int h : head_nodes(cert)) {
      auto [mu, img] =
          word_on_vector(V, factors, cert.wt[static_cast<std::size_t>(h)], node_column(B, cert, h));
      // Companion word: rightmost factor first.
      int cur = h;
      for (auto it = factors.rbegin(); it != factors.rend() && cur != -1; ++it)
        for (std::int64_t t = 0; t < it->second && cur != -1; ++t)
          cur = cert.f_map[static_cast<std::size_t>(cur)][static_cast<std::size_t>(it->first)];
      const Mat<K> strict = span_at(Sgt, mu, V.dim(mu));
      if (cur == -1) {
        if (img.size() > 0 && !in_span(strict, img))
          fail("operator word on head " + std::to_string(h) + " for datum " + L.to_string() +
               " survives while the companion word dies");
      } else {
        const Vec<K> target = node_column(B, cert, cur);
        if (img.size() == 0 || !proportional_mod(strict, target, img))
          fail("operator word on head " + std::to_string(h) + " for datum " + L.to_string() +
               " is not a unit multiple of the companion word");
      }
      if (img.size() > 0 && !in_span(strict, img)) {
        head_images.emplace_back(mu, img);
        head_ids.push_back(h);
      }
    }
    for (int b = 0; b < cert.size(); ++b) {
      if (walks[static_cast<std::size_t>(b)].datum != L) continue;
      const Weight& mu = cert.wt[static_cast<std::size_t>(b)];
      const Mat<K> strict = span_at(Sgt, mu, V.dim(mu));
      bool matched = false;
      for (std::size_t t = 0; t < head_images.size(); ++t)
        if (head_images[t].first == mu &&
            proportional_mod(strict, node_column(B, cert, b), head_images[t].second))
          matched = true;
      if (!matched)
        fail("element " + std::to_string(b) + " with datum " + L.to_string() +
             " is not matched by any head image");
    }
    for (std::size_t t = 0; t < head_images.size(); ++t) {
      const Weight& mu = head_images[t].first;
      const Mat<K> strict = span_at(Sgt, mu, V.dim(mu));
      bool matched = false;
      for (int b = 0; b < cert.size(); ++b)
        if (walks[static_cast<std::size_t>(b)].datum == L &&
            cert.wt[static_cast<std::size_t>(b)] == mu &&
            proportional_mod(strict, node_column(B, cert, b), head_images[t].second))
          matched = true;
      if (!matched)
        fail("head image for datum " + L.to_string() + " from node " +
             std::to_string(head_ids[t]) + " matches no element at " + mu.to_string());
    }
  }
  return rep;
}

template <typename K>
CrystalReport check_head_projection(const PreDualPerfectSpace<K>& V, const GradedBasis<K>& B,
                                    const DualPerfectCertificate<K>& cert) {
  CrystalReport rep;
  auto fail = [&rep](std::string msg) {
    rep.passed = false;
    rep.violations.push_back(std::move(msg));
  };
  const GradedSpan<K> R = lowered_sum(V);
  const std::vector<int> heads = head_nodes(cert);

  for (const auto& [mu, n] : V.dims) {
    const Mat<K> lowered = span_at(R, mu, n);
    std::vector<int> here;
    for (int h : heads)
      if (cert.wt[static_cast<std::size_t>(h)] == mu) here.push_back(h);
    Mat<K> cols(n, static_cast<Eigen::Index>(here.size()));
    for (std::size_t t = 0; t < here.size(); ++t)
      cols.col(static_cast<Eigen::Index>(t)) = node_column(B, cert, here[t]);
    const int r = rank_of<K>(lowered);
    if (rank_of<K>(hstack<K>({lowered, cols}, n)) != r + static_cast<int>(here.size()) ||
        r + static_cast<int>(here.size()) != n)
      fail("head elements do not project to a basis of the head quotient at " + mu.to_string());
  }
  for (int b = 0; b < cert.size(); ++b) {
    if (is_head(cert, b)) continue;
    const Weight& mu = cert.wt[static_cast<std::size_t>(b)];
    if (!in_span(span_at(R, mu, V.dim(mu)), Vec<K>(node_column(B, cert, b))))
      fail("element below a head has a nonzero head projection: node " + std::to_string(b));
  }
  return rep;
}

template <typename K>
MatchOutcome match_with_certificates(const PreDualPerfectSpace<K>& V, const GradedBasis<K>& B,
                                     const DualPerfectCertificate<K>& cb,
                                     const GradedBasis<K>& B2,
                                     const DualPerfectCertificate<K>& cb2,
                                     const GoodSequence& ib) {
  const GradedSpan<K> R = lowered_sum(V);
  auto residue_solver = [&](const Weight& mu) {
    return LinearSolver<K>(span_at(R, mu, V.dim(mu)));
  };

  // Hypothesis: the head residues agree exactly as sets.
  const std::vector<int> heads = head_nodes(cb);
  const std::vector<int> heads2 = head_nodes(cb2);
  std::map<Weight, std::vector<int>> by_wt, by_wt2;
  for (int h : heads) by_wt[cb.wt[static_cast<std::size_t>(h)]].push_back(h);
  for (int h : heads2) by_wt2[cb2.wt[static_cast<std::size_t>(h)]].push_back(h);
  if (by_wt.size() != by_wt2.size())
    throw HypothesisFailed("head elements of the two bases sit at different weights");
  std::map<int, int> head_match;
  for (const auto& [mu, hs] : by_wt) {
    auto it2 = by_wt2.find(mu);
    if (it2 == by_wt2.end() || it2->second.size() != hs.size())
      throw HypothesisFailed("number of head elements differs at " + mu.to_string());
    const auto solver = residue_solver(mu);
    std::set<int> used;
    for (int h : hs) {
      int found = -1;
      for (int h2 : it2->second) {
        const Vec<K> diff =
            Vec<K>(node_column(B, cb, h) - node_column(B2, cb2, h2));
        if (is_zero_vec(diff) || solver.contains(diff)) {
          if (found != -1)
            throw HypothesisFailed("head residue of node " + std::to_string(h) +
                                   " matches several heads of the second basis");
          found = h2;
        }
      }
      if (found == -1 || used.count(found))
        throw HypothesisFailed("head residues of the two bases differ at " + mu.to_string());
      used.insert(found);
      head_match[h] = found;
    }
  }

  // Match datum by datum through the quotients.
  const std::vector<StringWalk> walks = all_string_data(ib, cb);
  const std::vector<StringWalk> walks2 = all_string_data(ib, cb2);
  std::set<StringDatum, StringDatumLess> realized;
  for (const auto& w : walks) realized.insert(w.datum);
  for (const auto& w : walks2) realized.insert(w.datum);

  std::vector<int> psi(static_cast<std::size_t>(cb.size()), -1);
  std::vector<int> used(static_cast<std::size_t>(cb2.size()), 0);
  for (const StringDatum& L : realized) {
    const GradedSpan<K> Sgt = subspace_gt(V, ib, L);
    std::map<Weight, std::pair<std::vector<int>, std::vector<int>>> families;
    for (int b = 0; b < cb.size(); ++b)
      if (walks[static_cast<std::size_t>(b)].datum == L)
        families[cb.wt[static_cast<std::size_t>(b)]].first.push_back(b);
    for (int b = 0; b < cb2.size(); ++b)
      if (walks2[static_cast<std::size_t>(b)].datum == L)
        families[cb2.wt[static_cast<std::size_t>(b)]].second.push_back(b);

    for (const auto& [mu, fam] : families) {
      const auto& [first, second] = fam;
      if (first.size() != second.size())
        throw NotMonomial("datum " + L.to_string() + " has different multiplicities at " +
                          mu.to_string());
      const int n = V.dim(mu);
      const Mat<K> strict = span_at(Sgt, mu, n);
      Mat<K> A(n, static_cast<Eigen::Index>(second.size()) + strict.cols());
      for (std::size_t t = 0; t < second.size(); ++t)
        A.col(static_cast<Eigen::Index>(t)) = node_column(B2, cb2, second[t]);
      if (strict.cols() > 0) A.rightCols(strict.cols()) = strict;
      LinearSolver<K> solver(A);
      if (solver.rank() != static_cast<int>(second.size()) + rank_of<K>(strict))
        throw NotMonomial("elements of the second basis with datum " + L.to_string() +
                          " are dependent in the quotient at " + mu.to_string());
      for (int b : first) {
        const auto sol = solver.solve(Vec<K>(node_column(B, cb, b)));
        if (!sol)
          throw NotMonomial("element " + std::to_string(b) + " has no expansion in the quotient "
                            "for datum " + L.to_string());
        int touched = -1;
        for (std::size_t t = 0; t < second.size(); ++t) {
          if (FieldOps<K>::is_zero((*sol)[static_cast<Eigen::Index>(t)])) continue;
          if (touched != -1)
            throw NotMonomial("quotient change of basis is not monomial for datum " +
                              L.to_string() + " at " + mu.to_string());
          touched = static_cast<int>(t);
        }
        if (touched == -1)
          throw NotMonomial("element " + std::to_string(b) +
                            " vanishes in the quotient for datum " + L.to_string());
        const int target = second[static_cast<std::size_t>(touched)];
        if (used[static_cast<std::size_t>(target)]++)
          throw NotMonomial("quotient change of basis is not monomial for datum " +
                            L.to_string() + " at " + mu.to_string());
        psi[static_cast<std::size_t>(b)] = target;
      }
    }
  }

  // Verification: graph isomorphism, preserved string data, matching head
  // residues along the walks.
  MatchOutcome out;
  out.psi = psi;
  CrystalReport& rep = out.verification;
  auto fail = [&rep](std::string msg) {
    rep.passed = false;
    rep.violations.push_back(std::move(msg));
  };
  const AbstractCrystal X = extract_graph(V.datum, cb);
  const AbstractCrystal Y = extract_graph(V.datum, cb2);
  const CrystalReport iso = check_isomorphism(V.datum, X, Y, psi);
  if (!iso.passed) {
    rep.passed = false;
    rep.violations.insert(rep.violations.end(), iso.violations.begin(), iso.violations.end());
  }
  for (int b = 0; b < cb.size(); ++b) {
    const int b2 = psi[static_cast<std::size_t>(b)];
    if (b2 == -1) {
      fail("node " + std::to_string(b) + " was never matched");
      continue;
    }
    if (walks[static_cast<std::size_t>(b)].datum != walks2[static_cast<std::size_t>(b2)].datum)
      fail("matched elements have different string data: node " + std::to_string(b));
    const int t = walks[static_cast<std::size_t>(b)].terminal;
    const int t2 = walks2[static_cast<std::size_t>(b2)].terminal;
    const Weight& mu = cb.wt[static_cast<std::size_t>(t)];
    if (!(cb2.wt[static_cast<std::size_t>(t2)] == mu)) {
      fail("walk terminals of matched elements sit at different weights: node " +
           std::to_string(b));
      continue;
    }
    const Vec<K> diff = Vec<K>(node_column(B, cb, t) - node_column(B2, cb2, t2));
    if (!is_zero_vec(diff) && !residue_solver(mu).contains(diff))
      fail("walk terminals of matched elements have different head residues: node " +
           std::to_string(b));
  }
  return out;
}

template <typename K>
MatchOutcome match_dual_perfect_bases(const PreDualPerfectSpace<K>& V, const GradedBasis<K>& B,
                                      const GradedBasis<K>& B2, const GoodSequence& ib) {
  const auto first = verify_dual_perfect(V, B);
  if (!first.accepted)
    throw HypothesisFailed("first basis is not dual perfect: " + first.refutation.reason);
  const auto second = verify_dual_perfect(V, B2);
  if (!second.accepted)
    throw HypothesisFailed("second basis is not dual perfect: " + second.refutation.reason);
  return match_with_certificates(V, B, first.certificate, B2, second.certificate, ib);
}

#define QGKM_INSTANTIATE_STRINGS(K)                                                             \
  template int top_of_string(int, int, const DualPerfectCertificate<K>&);                       \
  template std::vector<int> head_nodes(const DualPerfectCertificate<K>&);                       \
  template StringWalk string_datum_walk(const GoodSequence&, int,                               \
                                        const DualPerfectCertificate<K>&);                      \
  template std::vector<StringWalk> all_string_data(const GoodSequence&,                         \
                                                   const DualPerfectCertificate<K>&);           \
  template GradedSpan<K> lowered_sum(const PreDualPerfectSpace<K>&);                            \
  template GradedSpan<K> subspace_gt(const PreDualPerfectSpace<K>&, const GoodSequence&,        \
                                     const StringDatum&);                                       \
  template GradedSpan<K> subspace_geq(const PreDualPerfectSpace<K>&, const GoodSequence&,       \
                                      const StringDatum&);                                      \
  template CrystalReport check_string_spans(const PreDualPerfectSpace<K>&,                      \
                                            const GradedBasis<K>&,                             \
                                            const DualPerfectCertificate<K>&,                   \
                                            const GoodSequence&);                               \
  template CrystalReport check_head_projection(const PreDualPerfectSpace<K>&,                   \
                                               const GradedBasis<K>&,                          \
                                               const DualPerfectCertificate<K>&);               \
  template MatchOutcome match_with_certificates(                                                \
      const PreDualPerfectSpace<K>&, const GradedBasis<K>&, const DualPerfectCertificate<K>&,   \
      const GradedBasis<K>&, const DualPerfectCertificate<K>&, const GoodSequence&);            \
  template MatchOutcome match_dual_perfect_bases(const PreDualPerfectSpace<K>&,                 \
                                                 const GradedBasis<K>&, const GradedBasis<K>&,  \
                                                 const GoodSequence&);

QGKM_INSTANTIATE_STRINGS(Rational)
QGKM_INSTANTIATE_STRINGS(Scalar)

#undef QGKM_INSTANTIATE_STRINGS

}  // namespace qgkm
