#include "qgkm/halfalg.hpp"

#include <algorithm>
#include <optional>

#include "qgkm/parallel.hpp"

namespace qgkm {

Content content_of(const Word& w, int index_count) {
  Content c(static_cast<std::size_t>(index_count), 0);
  for (int letter : w) c[static_cast<std::size_t>(letter)] += 1;
  return c;
}

std::vector<Word> words_of_content(const Content& beta) {
  std::vector<Word> out;
  const std::int64_t total = height(beta);
  Content rem = beta;
  Word cur;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<std::int64_t>(cur.size()) == total) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < rem.size(); ++i) {
      if (rem[i] <= 0) continue;
      rem[i] -= 1;
      cur.push_back(static_cast<int>(i));
      self(self);
      cur.pop_back();
      rem[i] += 1;
    }
  };
  rec(rec);
  return out;
}

void combo_add(WordCombo& acc, const Word& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc.try_emplace(w, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

WordCombo word_combo(const Word& w, const Scalar& c) {
  WordCombo out;
  combo_add(out, w, c);
  return out;
}

WordCombo left_multiply(int i, const WordCombo& P) {
  WordCombo out;
  for (const auto& [w, c] : P) {
    Word fw;
    fw.reserve(w.size() + 1);
    fw.push_back(i);
    fw.insert(fw.end(), w.begin(), w.end());
    combo_add(out, fw, c);
  }
  return out;
}

WordCombo e_prime(const CartanDatum& d, int i, const Word& w) {
  WordCombo out;
  std::int64_t exponent = 0;
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (w[t] == i) {
      Word rest;
      rest.reserve(w.size() - 1);
      rest.insert(rest.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(t));
      rest.insert(rest.end(), w.begin() + static_cast<std::ptrdiff_t>(t) + 1, w.end());
      combo_add(out, rest, d.q_power(i, exponent));
    }
    exponent -= d.a(i, w[t]);
  }
  return out;
}

WordCombo e_prime(const CartanDatum& d, int i, const WordCombo& P) {
  WordCombo out;
  for (const auto& [w, c] : P)
    for (const auto& [w2, c2] : e_prime(d, i, w)) combo_add(out, w2, c * c2);
  return out;
}

WordCombo e_doubleprime(const CartanDatum& d, int i, const Word& w) {
  WordCombo out;
  std::int64_t exponent = 0;
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (w[t] == i) {
      Word rest;
      rest.reserve(w.size() - 1);
      rest.insert(rest.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(t));
      rest.insert(rest.end(), w.begin() + static_cast<std::ptrdiff_t>(t) + 1, w.end());
      combo_add(out, rest, d.q_power(i, exponent));
    }
    exponent += d.a(i, w[t]);
  }
  return out;
}

WordCombo e_doubleprime(const CartanDatum& d, int i, const WordCombo& P) {
  WordCombo out;
  for (const auto& [w, c] : P)
    for (const auto& [w2, c2] : e_doubleprime(d, i, w)) combo_add(out, w2, c * c2);
  return out;
}

Scalar form_value(const CartanDatum& d, const WordCombo& P, const WordCombo& Q) {
  const int n = d.size();
  std::optional<Content> cont;
  auto check = [&](const WordCombo& C) {
    for (const auto& [w, c] : C) {
      (void)c;
      Content b = content_of(w, n);
      if (!cont)
        cont = std::move(b);
      else if (*cont != b)
        throw InvalidDatum("bilinear form arguments are not homogeneous of equal weight");
    }
  };
  check(P);
  check(Q);
  std::map<std::pair<Word, Word>, Scalar> memo;
  auto pair_words = [&](auto&& self, const Word& p, const Word& q) -> Scalar {
    if (p.empty()) return Scalar(1);
    const auto key = std::make_pair(p, q);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int i = p.front();
    const Word tail(p.begin() + 1, p.end());
    Scalar acc(0);
    for (const auto& [w2, c2] : e_prime(d, i, q)) acc = acc + c2 * self(self, tail, w2);
    memo.emplace(key, acc);
    return acc;
  };
  Scalar total(0);
  for (const auto& [p, cp] : P)
    for (const auto& [q, cq] : Q) total = total + cp * cq * pair_words(pair_words, p, q);
  return total;
}

WordCombo serre_element(const CartanDatum& d, int i, int j) {
  if (i == j) throw InvalidDatum("Serre element requires distinct indices");
  if (!d.real(i)) throw InvalidDatum("Serre element requires a real first index");
  const std::int64_t N = 1 - d.a(i, j);
  WordCombo out;
  for (std::int64_t k = 0; k <= N; ++k) {
    Word w;
    w.insert(w.end(), static_cast<std::size_t>(k), i);
    w.push_back(j);
    w.insert(w.end(), static_cast<std::size_t>(N - k), i);
    Scalar coeff =
        d.quantum_factorial(i, k).inverse() * d.quantum_factorial(i, N - k).inverse();
    if (k % 2) coeff = -coeff;
    combo_add(out, w, coeff);
  }
  return out;
}

WordCombo commutator_element(const CartanDatum& d, int i, int j) {
  if (d.a(i, j) != 0) throw InvalidDatum("commutator element requires a_ij = 0");
  WordCombo out;
  combo_add(out, Word{i, j}, Scalar(1));
  combo_add(out, Word{j, i}, Scalar(-1));
  return out;
}

namespace {

Content minus_alpha(const Content& beta, int i) {
  Content c = beta;
  c[static_cast<std::size_t>(i)] -= 1;
  return c;
}

Content plus_alpha(const Content& beta, int i) {
  Content c = beta;
  c[static_cast<std::size_t>(i)] += 1;
  return c;
}

}  // namespace

const HalfAlgebra::Block& HalfAlgebra::block(const Content& beta) const {
  auto it = blocks_.find(beta);
  if (it == blocks_.end()) {
    std::string msg = "content (";
    for (std::size_t k = 0; k < beta.size(); ++k)
      msg += (k ? "," : "") + std::to_string(beta[k]);
    msg += ") is outside the truncation";
    throw TruncationEscape(msg);
  }
  return it->second;
}

const std::vector<Content>& HalfAlgebra::contents_at_height(int h) const {
  if (h < 0 || h > depth_) throw TruncationEscape("height " + std::to_string(h) +
                                                  " is outside the truncation");
  return by_height_[static_cast<std::size_t>(h)];
}

bool HalfAlgebra::has_content(const Content& beta) const { return blocks_.count(beta) > 0; }

Weight HalfAlgebra::weight_of(const Content& beta) const {
  return datum_.lower_by(datum_.zero_weight(), beta);
}

int HalfAlgebra::dim(const Content& beta) const {
  return static_cast<int>(block(beta).basis.size());
}

const std::vector<Word>& HalfAlgebra::words(const Content& beta) const {
  return block(beta).words;
}

const std::vector<int>& HalfAlgebra::basis_word_indices(const Content& beta) const {
  return block(beta).basis;
}

std::vector<Word> HalfAlgebra::basis_words(const Content& beta) const {
  const Block& b = block(beta);
  std::vector<Word> out;
  out.reserve(b.basis.size());
  for (int k : b.basis) out.push_back(b.words[static_cast<std::size_t>(k)]);
  return out;
}

const MatQq& HalfAlgebra::gram(const Content& beta) const { return block(beta).gram; }

MatQq HalfAlgebra::gram_on_basis(const Content& beta) const {
  const Block& b = block(beta);
  const int dim = static_cast<int>(b.basis.size());
  MatQq g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      g(r, c) = b.gram(b.basis[static_cast<std::size_t>(r)], b.basis[static_cast<std::size_t>(c)]);
  return g;
}

VecQq HalfAlgebra::expand_word(const Content& beta, const Word& w) const {
  const Block& b = block(beta);
  auto it = b.index.find(w);
  if (it == b.index.end()) throw InvalidDatum("word does not have the requested content");
  return b.expansion.col(it->second);
}

VecQq HalfAlgebra::expand(const WordCombo& P) const {
  std::optional<Content> cont;
  for (const auto& [w, c] : P) {
    (void)c;
    Content b = content_of(w, datum_.size());
    if (!cont)
      cont = std::move(b);
    else if (*cont != b)
      throw InvalidDatum("combination is not homogeneous");
  }
  if (!cont) throw InvalidDatum("cannot expand the zero combination without a content");
  const Block& b = block(*cont);
  VecQq out = VecQq::Zero(static_cast<Eigen::Index>(b.basis.size()));
  for (const auto& [w, c] : P) out += c * VecQq(b.expansion.col(b.index.at(w)));
  return out;
}

MatQq HalfAlgebra::f_matrix(int i, const Content& beta) const {
  if (i < 0 || i >= datum_.size()) throw InvalidDatum("index out of range");
  if (height(beta) + 1 > depth_)
    throw TruncationEscape("f_i image leaves the truncation depth");
  (void)block(beta);
  return f_mat_.at({i, beta});
}

MatQq HalfAlgebra::e_prime_matrix(int i, const Content& beta) const {
  if (i < 0 || i >= datum_.size()) throw InvalidDatum("index out of range");
  const Block& b = block(beta);
  if (beta[static_cast<std::size_t>(i)] == 0)
    return MatQq::Zero(0, static_cast<Eigen::Index>(b.basis.size()));
  return ep_mat_.at({i, beta});
}

HalfAlgebra HalfAlgebra::build(const CartanDatum& d, int depth) {
  if (depth < 0) throw InvalidDatum("truncation depth must be nonnegative");
  HalfAlgebra H(d, depth);
  const int n = d.size();

  // Enumerate all contents of height <= depth, grouped by height.
  H.by_height_.assign(static_cast<std::size_t>(depth) + 1, {});
  {
    Content cur(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, std::int64_t sum) -> void {
      if (pos == n) {
        H.by_height_[static_cast<std::size_t>(sum)].push_back(cur);
        return;
      }
      for (std::int64_t k = 0; sum + k <= depth; ++k) {
        cur[static_cast<std::size_t>(pos)] = k;
        self(self, pos + 1, sum + k);
      }
      cur[static_cast<std::size_t>(pos)] = 0;
    };
    rec(rec, 0, 0);
  }
  for (auto& level : H.by_height_) {
    std::sort(level.begin(), level.end());
    for (const auto& c : level) {
      H.contents_.push_back(c);
      H.blocks_.emplace(c, Block{});
    }
  }

  // Per-height construction; blocks within one height are independent.
  for (int h = 0; h <= depth; ++h) {
    const auto& level = H.by_height_[static_cast<std::size_t>(h)];
    parallel_for(level.size(), [&](std::size_t k) {
      const Content& beta = level[k];
      Block& B = H.blocks_.at(beta);
      B.words = words_of_content(beta);
      for (std::size_t w = 0; w < B.words.size(); ++w)
        B.index.emplace(B.words[w], static_cast<int>(w));
      const int t = static_cast<int>(B.words.size());
      B.gram = MatQq(t, t);
      if (h == 0) {
        B.gram(0, 0) = Scalar(1);
      } else {
        // (f_i u, w_c) = sum over e'_i w_c of the lower-height Gram entries.
        // Precompute e'_i of every column word for each first letter i in use.
        std::map<int, std::vector<std::vector<std::pair<int, Scalar>>>> etab;
        for (int r = 0; r < t; ++r) {
          const int i = B.words[static_cast<std::size_t>(r)][0];
          if (etab.count(i)) continue;
          const Block& L = H.blocks_.at(minus_alpha(beta, i));
          auto& tab = etab[i];
          tab.resize(static_cast<std::size_t>(t));
          for (int c = 0; c < t; ++c) {
            for (const auto& [w2, c2] : e_prime(d, i, B.words[static_cast<std::size_t>(c)]))
              tab[static_cast<std::size_t>(c)].emplace_back(L.index.at(w2), c2);
          }
        }
        for (int r = 0; r < t; ++r) {
          const int i = B.words[static_cast<std::size_t>(r)][0];
          const Block& L = H.blocks_.at(minus_alpha(beta, i));
          const Word tail(B.words[static_cast<std::size_t>(r)].begin() + 1,
                          B.words[static_cast<std::size_t>(r)].end());
          const int tail_idx = L.index.at(tail);
          const auto& tab = etab.at(i);
          for (int c = 0; c < t; ++c) {
            Scalar acc(0);
            for (const auto& [target, coeff] : tab[static_cast<std::size_t>(c)])
              acc = acc + coeff * L.gram(tail_idx, target);
            B.gram(r, c) = acc;
          }
        }
        for (int r = 0; r < t; ++r)
          for (int c = r + 1; c < t; ++c)
            if (!(B.gram(r, c) == B.gram(c, r)))
              throw Error("bilinear form recursion produced an asymmetric Gram matrix");
      }

      // Greedy leftmost words whose Gram rows are independent.
      ColumnSpan<Scalar> span(t);
      for (int r = 0; r < t; ++r) {
        if (span.add(B.gram.row(r).transpose())) B.basis.push_back(r);
      }
      const int dim = static_cast<int>(B.basis.size());

      // Expansion of every word over the selected basis: since the selected
      // principal Gram submatrix is nonsingular, coordinates are determined by
      // pairings against the selected words.
      if (dim == 0) {
        B.expansion = MatQq(0, t);
        return;
      }
      MatQq gss(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
          gss(r, c) =
              B.gram(B.basis[static_cast<std::size_t>(r)], B.basis[static_cast<std::size_t>(c)]);
      LinearSolver<Scalar> solver(gss);
      if (!solver.full_column_rank())
        throw Error("selected Gram submatrix is singular");
      B.expansion = MatQq(dim, t);
      for (int c = 0; c < t; ++c) {
        VecQq rhs(dim);
        for (int r = 0; r < dim; ++r) rhs(r) = B.gram(B.basis[static_cast<std::size_t>(r)], c);
        auto x = solver.solve(rhs);
        if (!x) throw Error("word expansion system is inconsistent");
        B.expansion.col(c) = *x;
      }
    });
  }

  // Action matrices between selected bases.
  for (const auto& beta : H.contents_) {
    const Block& B = H.blocks_.at(beta);
    const int dim = static_cast<int>(B.basis.size());
    for (int i = 0; i < n; ++i) {
      if (height(beta) + 1 <= depth) {
        const Content up = plus_alpha(beta, i);
        const Block& T = H.blocks_.at(up);
        MatQq M(static_cast<Eigen::Index>(T.basis.size()), dim);
        for (int b = 0; b < dim; ++b) {
          Word fw;
          const Word& w = B.words[static_cast<std::size_t>(B.basis[static_cast<std::size_t>(b)])];
          fw.reserve(w.size() + 1);
          fw.push_back(i);
          fw.insert(fw.end(), w.begin(), w.end());
          M.col(b) = T.expansion.col(T.index.at(fw));
        }
        H.f_mat_.emplace(std::make_pair(i, beta), std::move(M));
      }
      if (beta[static_cast<std::size_t>(i)] >= 1) {
        const Content down = minus_alpha(beta, i);
        const Block& L = H.blocks_.at(down);
        MatQq M = MatQq::Zero(static_cast<Eigen::Index>(L.basis.size()), dim);
        for (int b = 0; b < dim; ++b) {
          const Word& w = B.words[static_cast<std::size_t>(B.basis[static_cast<std::size_t>(b)])];
          for (const auto& [w2, c2] : e_prime(d, i, w))
            M.col(b) += c2 * VecQq(L.expansion.col(L.index.at(w2)));
        }
        H.ep_mat_.emplace(std::make_pair(i, beta), std::move(M));
      }
    }
  }
  return H;
}

}  // namespace qgkm
