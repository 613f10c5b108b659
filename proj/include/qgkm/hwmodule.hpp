#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qgkm/cartan.hpp"
#include "qgkm/halfalg.hpp"
#include "qgkm/linalg.hpp"
#include "qgkm/scalar.hpp"

namespace qgkm {

/// Outcome of the integrability-category axiom checks on a built module.
/// `violations` are definite failures; `indeterminate` are checks that could
/// not be decided inside the truncation (boundary-limited), never failures.
struct OintReport {
  bool passed = true;
  std::vector<std::string> violations;
  std::vector<std::string> indeterminate;
};

/// Weight-truncated irreducible highest-weight module: the span of words
/// f_{i_1}...f_{i_k} applied to the highest vector, divided per weight by the
/// radical of the contravariant form ((v,v) = 1 on the highest vector and
/// (f_i u, w) = (u, e_i w)). Uses the same word order, greedy basis rule and
/// expansion machinery as the half-algebra model, but an independent Gram
/// recursion driven by the highest weight.
class HWModule {
 public:
  static HWModule build(const CartanDatum& d, const Weight& lambda, int depth);

  const CartanDatum& datum() const { return datum_; }
  const Weight& highest_weight() const { return lambda_; }
  int depth() const { return depth_; }

  const std::vector<Content>& contents() const { return contents_; }
  const std::vector<Content>& contents_at_height(int h) const;
  bool has_content(const Content& beta) const;
  Weight weight_of(const Content& beta) const;            // lambda - beta
  std::int64_t pairing(int i, const Content& beta) const;  // <h_i, weight_of(beta)>
  Scalar k_scalar(int i, const Content& beta) const;       // q_i^{<h_i, mu>}

  int dim(const Content& beta) const;
  std::int64_t total_dim() const;
  /// True when every weight space at the deepest stored height vanishes, so
  /// the truncation contains the whole module and no boundary is reachable.
  bool complete() const;

  const std::vector<Word>& words(const Content& beta) const;
  const std::vector<int>& basis_word_indices(const Content& beta) const;
  std::vector<Word> basis_words(const Content& beta) const;
  const MatQq& gram(const Content& beta) const;
  MatQq gram_on_basis(const Content& beta) const;
  VecQq expand_word(const Content& beta, const Word& w) const;
  VecQq expand(const WordCombo& P) const;

  /// Raising action on a word vector by the rewriting rule
  /// e_i(f_j u) = f_j e_i(u) + delta_ij [<h_i, wt(u)>]_i u, e_i(highest) = 0.
  WordCombo e_action(int i, const Word& w) const;

  /// f_i between selected bases; throws TruncationEscape past the boundary.
  MatQq f_matrix(int i, const Content& beta) const;
  /// e_i between selected bases; zero map onto a 0-dimensional space when
  /// beta has no alpha_i component.
  MatQq e_matrix(int i, const Content& beta) const;

  /// Matrix of the word w (rightmost letter acts first) from the basis at
  /// `from` to the basis at `from + content(w)`.
  MatQq word_action(const Word& w, const Content& from) const;
  /// Matrix of a homogeneous combination of words.
  MatQq combo_action(const WordCombo& P, const Content& from) const;

  OintReport check_oint() const;

 private:
  HWModule(CartanDatum d, Weight lambda, int depth)
      : datum_(std::move(d)), lambda_(std::move(lambda)), depth_(depth) {}

  struct Block {
    std::vector<Word> words;
    std::map<Word, int> index;
    MatQq gram;
    std::vector<int> basis;
    MatQq expansion;  // dim x #words
  };

  const Block& block(const Content& beta) const;

  CartanDatum datum_;
  Weight lambda_;
  int depth_ = 0;
  std::map<Content, Block> blocks_;
  std::vector<std::vector<Content>> by_height_;
  std::vector<Content> contents_;
  std::map<std::pair<int, Content>, MatQq> f_mat_;
  std::map<std::pair<int, Content>, MatQq> e_mat_;
};

}  // namespace qgkm
