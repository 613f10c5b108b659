#include "qgkm/hwmodule.hpp"

#include <algorithm>

#include "qgkm/parallel.hpp"

namespace qgkm {

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

std::string content_str(const Content& beta) {
  std::string msg = "(";
  for (std::size_t k = 0; k < beta.size(); ++k) msg += (k ? "," : "") + std::to_string(beta[k]);
  return msg + ")";
}

}  // namespace

const HWModule::Block& HWModule::block(const Content& beta) const {
  auto it = blocks_.find(beta);
  if (it == blocks_.end())
    throw TruncationEscape("content " + content_str(beta) + " is outside the truncation");
  return it->second;
}

const std::vector<Content>& HWModule::contents_at_height(int h) const {
  if (h < 0 || h > depth_)
    throw TruncationEscape("height " + std::to_string(h) + " is outside the truncation");
  return by_height_[static_cast<std::size_t>(h)];
}

bool HWModule::has_content(const Content& beta) const { return blocks_.count(beta) > 0; }

Weight HWModule::weight_of(const Content& beta) const { return datum_.lower_by(lambda_, beta); }

std::int64_t HWModule::pairing(int i, const Content& beta) const {
  return datum_.pair(i, weight_of(beta));
}

Scalar HWModule::k_scalar(int i, const Content& beta) const {
  return datum_.q_power(i, pairing(i, beta));
}

int HWModule::dim(const Content& beta) const {
  return static_cast<int>(block(beta).basis.size());
}

std::int64_t HWModule::total_dim() const {
  std::int64_t total = 0;
  for (const auto& [beta, b] : blocks_) {
    (void)beta;
    total += static_cast<std::int64_t>(b.basis.size());
  }
  return total;
}

bool HWModule::complete() const {
  for (const auto& beta : by_height_[static_cast<std::size_t>(depth_)])
    if (dim(beta) != 0) return false;
  return true;
}

const std::vector<Word>& HWModule::words(const Content& beta) const { return block(beta).words; }

const std::vector<int>& HWModule::basis_word_indices(const Content& beta) const {
  return block(beta).basis;
}

std::vector<Word> HWModule::basis_words(const Content& beta) const {
  const Block& b = block(beta);
  std::vector<Word> out;
  out.reserve(b.basis.size());
  for (int k : b.basis) out.push_back(b.words[static_cast<std::size_t>(k)]);
  return out;
}

const MatQq& HWModule::gram(const Content& beta) const { return block(beta).gram; }

MatQq HWModule::gram_on_basis(const Content& beta) const {
  const Block& b = block(beta);
  const int dim = static_cast<int>(b.basis.size());
  MatQq g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      g(r, c) = b.gram(b.basis[static_cast<std::size_t>(r)], b.basis[static_cast<std::size_t>(c)]);
  return g;
}

VecQq HWModule::expand_word(const Content& beta, const Word& w) const {
  const Block& b = block(beta);
  auto it = b.index.find(w);
  if (it == b.index.end()) throw InvalidDatum("word does not have the requested content");
  return b.expansion.col(it->second);
}

VecQq HWModule::expand(const WordCombo& P) const {
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

WordCombo HWModule::e_action(int i, const Word& w) const {
  WordCombo out;
  std::int64_t p = datum_.pair(i, lambda_);
  for (int t = static_cast<int>(w.size()) - 1; t >= 0; --t) {
    if (w[static_cast<std::size_t>(t)] == i) {
      Word rest;
      rest.reserve(w.size() - 1);
      rest.insert(rest.end(), w.begin(), w.begin() + t);
      rest.insert(rest.end(), w.begin() + t + 1, w.end());
      combo_add(out, rest, datum_.quantum_integer(i, p));
    }
    p -= datum_.a(i, w[static_cast<std::size_t>(t)]);
  }
  return out;
}

MatQq HWModule::f_matrix(int i, const Content& beta) const {
  if (i < 0 || i >= datum_.size()) throw InvalidDatum("index out of range");
  if (height(beta) + 1 > depth_)
    throw TruncationEscape("f_i image leaves the truncation depth");
  (void)block(beta);
  return f_mat_.at({i, beta});
}

MatQq HWModule::e_matrix(int i, const Content& beta) const {
  if (i < 0 || i >= datum_.size()) throw InvalidDatum("index out of range");
  const Block& b = block(beta);
  if (beta[static_cast<std::size_t>(i)] == 0)
    return MatQq::Zero(0, static_cast<Eigen::Index>(b.basis.size()));
  return e_mat_.at({i, beta});
}

MatQq HWModule::word_action(const Word& w, const Content& from) const {
  const int start_dim = dim(from);
  MatQq M = MatQq::Identity(start_dim, start_dim);
  Content cur = from;
  for (int s = static_cast<int>(w.size()) - 1; s >= 0; --s) {
    const int i = w[static_cast<std::size_t>(s)];
    M = MatQq(f_matrix(i, cur) * M);
    cur = plus_alpha(cur, i);
  }
  return M;
}

MatQq HWModule::combo_action(const WordCombo& P, const Content& from) const {
  std::optional<Content> cont;
  for (const auto& [w, c] : P) {
    (void)c;
    Content b = content_of(w, datum_.size());
    if (!cont)
      cont = std::move(b);
    else if (*cont != b)
      throw InvalidDatum("combination is not homogeneous");
  }
  if (!cont) throw InvalidDatum("cannot apply the zero combination without a content");
  Content target = from;
  for (std::size_t k = 0; k < target.size(); ++k) target[k] += (*cont)[k];
  MatQq M = MatQq::Zero(dim(target), dim(from));
  for (const auto& [w, c] : P) M += c * word_action(w, from);
  return M;
}

HWModule HWModule::build(const CartanDatum& d, const Weight& lambda, int depth) {
  if (depth < 0) throw InvalidDatum("truncation depth must be nonnegative");
  if (lambda.size() != d.lattice_rank())
    throw InvalidDatum("highest weight has the wrong coordinate length");
  d.require_dominant(lambda);
  HWModule M(d, lambda, depth);
  const int n = d.size();

  M.by_height_.assign(static_cast<std::size_t>(depth) + 1, {});
  {
    Content cur(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, std::int64_t sum) -> void {
      if (pos == n) {
        M.by_height_[static_cast<std::size_t>(sum)].push_back(cur);
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
  for (auto& level : M.by_height_) {
    std::sort(level.begin(), level.end());
    for (const auto& c : level) {
      M.contents_.push_back(c);
      M.blocks_.emplace(c, Block{});
    }
  }

  for (int h = 0; h <= depth; ++h) {
    const auto& level = M.by_height_[static_cast<std::size_t>(h)];
    parallel_for(level.size(), [&](std::size_t idx) {
      const Content& beta = level[idx];
      Block& B = M.blocks_.at(beta);
      B.words = words_of_content(beta);
      for (std::size_t w = 0; w < B.words.size(); ++w)
        B.index.emplace(B.words[w], static_cast<int>(w));
      const int t = static_cast<int>(B.words.size());
      B.gram = MatQq(t, t);
      if (h == 0) {
        B.gram(0, 0) = Scalar(1);
      } else {
        // (f_i u, w_c) = (u, e_i w_c): recurse through the raising action.
        std::map<int, std::vector<std::vector<std::pair<int, Scalar>>>> etab;
        for (int r = 0; r < t; ++r) {
          const int i = B.words[static_cast<std::size_t>(r)][0];
          if (etab.count(i)) continue;
          const Block& L = M.blocks_.at(minus_alpha(beta, i));
          auto& tab = etab[i];
          tab.resize(static_cast<std::size_t>(t));
          for (int c = 0; c < t; ++c) {
            for (const auto& [w2, c2] : M.e_action(i, B.words[static_cast<std::size_t>(c)]))
              tab[static_cast<std::size_t>(c)].emplace_back(L.index.at(w2), c2);
          }
        }
        for (int r = 0; r < t; ++r) {
          const int i = B.words[static_cast<std::size_t>(r)][0];
          const Block& L = M.blocks_.at(minus_alpha(beta, i));
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
              throw Error("contravariant form recursion produced an asymmetric Gram matrix");
      }

      ColumnSpan<Scalar> span(t);
      for (int r = 0; r < t; ++r) {
        if (span.add(B.gram.row(r).transpose())) B.basis.push_back(r);
      }
      const int dim = static_cast<int>(B.basis.size());
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
      if (!solver.full_column_rank()) throw Error("selected Gram submatrix is singular");
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

  for (const auto& beta : M.contents_) {
    const Block& B = M.blocks_.at(beta);
    const int dim = static_cast<int>(B.basis.size());
    for (int i = 0; i < n; ++i) {
      if (height(beta) + 1 <= depth) {
        const Content up = plus_alpha(beta, i);
        const Block& T = M.blocks_.at(up);
        MatQq F(static_cast<Eigen::Index>(T.basis.size()), dim);
        for (int b = 0; b < dim; ++b) {
          Word fw;
          const Word& w = B.words[static_cast<std::size_t>(B.basis[static_cast<std::size_t>(b)])];
          fw.reserve(w.size() + 1);
          fw.push_back(i);
          fw.insert(fw.end(), w.begin(), w.end());
          F.col(b) = T.expansion.col(T.index.at(fw));
        }
        M.f_mat_.emplace(std::make_pair(i, beta), std::move(F));
      }
      if (beta[static_cast<std::size_t>(i)] >= 1) {
        const Content down = minus_alpha(beta, i);
        const Block& L = M.blocks_.at(down);
        MatQq E = MatQq::Zero(static_cast<Eigen::Index>(L.basis.size()), dim);
        for (int b = 0; b < dim; ++b) {
          const Word& w = B.words[static_cast<std::size_t>(B.basis[static_cast<std::size_t>(b)])];
          for (const auto& [w2, c2] : M.e_action(i, w))
            E.col(b) += c2 * VecQq(L.expansion.col(L.index.at(w2)));
        }
        M.e_mat_.emplace(std::make_pair(i, beta), std::move(E));
      }
    }
  }
  return M;
}

OintReport HWModule::check_oint() const {
  OintReport rep;
  const int n = datum_.size();
  for (const auto& beta : contents_) {
    const int dm = dim(beta);
    if (dm == 0) continue;
    const Weight mu = weight_of(beta);
    for (int i = 0; i < n; ++i) {
      const std::int64_t p = datum_.pair(i, mu);
      if (datum_.real(i)) {
        // Lowering operators of real indices act nilpotently on every vector:
        // follow the composed maps until they vanish or leave the truncation.
        MatQq walk = MatQq::Identity(dm, dm);
        Content cur = beta;
        for (;;) {
          bool zero = true;
          for (Eigen::Index r = 0; r < walk.rows() && zero; ++r)
            for (Eigen::Index c = 0; c < walk.cols() && zero; ++c)
              if (!walk(r, c).is_zero()) zero = false;
          if (zero) break;
          if (height(cur) + 1 > depth_) {
            rep.indeterminate.push_back("nilpotency of f_" + std::to_string(i) + " from content " +
                                        content_str(beta) +
                                        " is unresolved at the truncation boundary");
            break;
          }
          walk = MatQq(f_matrix(i, cur) * walk);
          cur = plus_alpha(cur, i);
        }
      } else {
        if (p < 0) {
          rep.violations.push_back("weight " + mu.to_string() + " occurs with <h_" +
                                   std::to_string(i) + ", mu> = " + std::to_string(p) + " < 0");
        }
        if (p == 0) {
          if (height(beta) + 1 > depth_) {
            rep.indeterminate.push_back("f_" + std::to_string(i) + " on weight " + mu.to_string() +
                                        " cannot be checked at the truncation boundary");
          } else {
            const MatQq F = f_matrix(i, beta);
            bool zero = true;
            for (Eigen::Index r = 0; r < F.rows() && zero; ++r)
              for (Eigen::Index c = 0; c < F.cols() && zero; ++c)
                if (!F(r, c).is_zero()) zero = false;
            if (!zero)
              rep.violations.push_back("f_" + std::to_string(i) + " does not vanish on weight " +
                                       mu.to_string() + " with <h_i, mu> = 0");
          }
        }
        if (p == -datum_.a(i, i)) {
          const MatQq E = e_matrix(i, beta);
          bool zero = true;
          for (Eigen::Index r = 0; r < E.rows() && zero; ++r)
            for (Eigen::Index c = 0; c < E.cols() && zero; ++c)
              if (!E(r, c).is_zero()) zero = false;
          if (!zero)
            rep.violations.push_back("e_" + std::to_string(i) + " does not vanish on weight " +
                                     mu.to_string() + " with <h_i, mu> = -a_ii");
        }
      }
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

}  // namespace qgkm
