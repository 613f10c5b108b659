#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qgkm/cartan.hpp"
#include "qgkm/linalg.hpp"
#include "qgkm/scalar.hpp"

namespace qgkm {

/// A monomial f_{w[0]} f_{w[1]} ... f_{w[k-1]} in the lowering generators,
/// recorded by its index word (leftmost letter = outermost factor).
using Word = std::vector<int>;

/// Finite linear combination of monomials, keyed deterministically.
using WordCombo = std::map<Word, Scalar>;

Content content_of(const Word& w, int index_count);
std::vector<Word> words_of_content(const Content& beta);  // lexicographic order

/// acc += c * w, erasing the entry if the total cancels.
void combo_add(WordCombo& acc, const Word& w, const Scalar& c);
WordCombo word_combo(const Word& w, const Scalar& c = Scalar(1));
WordCombo left_multiply(int i, const WordCombo& P);

/// Derivation-style operator with e'_i(1) = 0 and
/// e'_i(f_j u) = delta_ij u + q_i^{-a_ij} f_j e'_i(u).
WordCombo e_prime(const CartanDatum& d, int i, const Word& w);
WordCombo e_prime(const CartanDatum& d, int i, const WordCombo& P);

/// Mirrored twist: e''_i(f_j u) = delta_ij u + q_i^{+a_ij} f_j e''_i(u).
WordCombo e_doubleprime(const CartanDatum& d, int i, const Word& w);
WordCombo e_doubleprime(const CartanDatum& d, int i, const WordCombo& P);

/// The symmetric bilinear form determined by (1,1) = 1 and
/// (f_i P, Q) = (P, e'_i Q). Arguments must be homogeneous of equal content.
Scalar form_value(const CartanDatum& d, const WordCombo& P, const WordCombo& Q);

/// Sum_{k=0}^{N} (-1)^k f_i^{(k)} f_j f_i^{(N-k)} with N = 1 - a_ij,
/// for a real index i != j (divided powers f_i^{(k)} = f_i^k / [k]_i!).
WordCombo serre_element(const CartanDatum& d, int i, int j);

/// f_i f_j - f_j f_i; requires a_ij = 0.
WordCombo commutator_element(const CartanDatum& d, int i, int j);

/// Weight-truncated model of the lower half: for every content beta of height
/// <= depth it stores all monomial words, the Gram matrix of the bilinear
/// form, a selected word basis of the quotient by the radical (greedy leftmost
/// words in lexicographic order whose Gram rows are independent), expansion of
/// every word over the selected basis, and the f_i / e'_i matrices acting
/// between selected bases.
class HalfAlgebra {
 public:
  static HalfAlgebra build(const CartanDatum& d, int depth);

  const CartanDatum& datum() const { return datum_; }
  int depth() const { return depth_; }

  /// All contents with height <= depth, ordered by (height, lexicographic).
  const std::vector<Content>& contents() const { return contents_; }
  const std::vector<Content>& contents_at_height(int h) const;
  bool has_content(const Content& beta) const;
  Weight weight_of(const Content& beta) const;  // -beta inside P

  int dim(const Content& beta) const;
  const std::vector<Word>& words(const Content& beta) const;
  const std::vector<int>& basis_word_indices(const Content& beta) const;
  std::vector<Word> basis_words(const Content& beta) const;
  const MatQq& gram(const Content& beta) const;  // on all words
  MatQq gram_on_basis(const Content& beta) const;

  /// Coordinates of a word (or homogeneous combination) over the selected
  /// basis of its content, i.e. the image in the quotient by the radical.
  VecQq expand_word(const Content& beta, const Word& w) const;
  VecQq expand(const WordCombo& P) const;

  /// Left multiplication by f_i: dim(beta) -> dim(beta + alpha_i).
  /// Throws TruncationEscape when the target leaves the truncation.
  MatQq f_matrix(int i, const Content& beta) const;
  /// e'_i: dim(beta) -> dim(beta - alpha_i); the zero map onto a 0-dimensional
  /// space when beta has no alpha_i component.
  MatQq e_prime_matrix(int i, const Content& beta) const;

 private:
  HalfAlgebra(CartanDatum d, int depth) : datum_(std::move(d)), depth_(depth) {}

  struct Block {
    std::vector<Word> words;
    std::map<Word, int> index;
    MatQq gram;               // #words x #words
    std::vector<int> basis;   // selected word indices, increasing
    MatQq expansion;          // dim x #words
  };

  const Block& block(const Content& beta) const;  // throws TruncationEscape

  CartanDatum datum_;
  int depth_ = 0;
  std::map<Content, Block> blocks_;
  std::vector<std::vector<Content>> by_height_;
  std::vector<Content> contents_;
  std::map<std::pair<int, Content>, MatQq> f_mat_;
  std::map<std::pair<int, Content>, MatQq> ep_mat_;
};

}  // namespace qgkm
