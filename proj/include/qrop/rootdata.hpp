#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrop/symbolic.hpp"

namespace qrop {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidMoveError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class CartanType { A, B, C, D, G };

inline char type_letter(CartanType t) { return "ABCDG"[static_cast<int>(t)]; }

inline CartanType parse_cartan_type(char c) {
  switch (c) {
    case 'A': case 'a': return CartanType::A;
    case 'B': case 'b': return CartanType::B;
    case 'C': case 'c': return CartanType::C;
    case 'D': case 'd': return CartanType::D;
    case 'G': case 'g': return CartanType::G;
    default: throw ConfigError(std::string("unknown Cartan type '") + c + "'");
  }
}

using Root = std::vector<int>;        ///< coordinates in the simple-root basis
using ReducedWord = std::vector<int>;  ///< 1-based node indices

/// Cartan data with nodes indexed 0..rank-1 internally (1-based in words).
struct CartanData {
  CartanType type = CartanType::A;
  int rank = 0;
  std::vector<std::vector<int>> a;  ///< a[i][j] = 2(alpha_i, alpha_j)/(alpha_i, alpha_i)
  std::vector<Rational> halfnorm;   ///< d_i = (alpha_i, alpha_i)/2
  std::vector<bool> short_node;     ///< b_i = b_s on short nodes of non-simply-laced types

  [[nodiscard]] Sym b(int i) const { return short_node.at(i) ? Sym::bs() : Sym::bl(); }
  [[nodiscard]] Sym b_inv(int i) const { return short_node.at(i) ? Sym::bs_inv() : Sym::bl_inv(); }
  /// Exponent theta with q_i = e^{pi i theta}.
  [[nodiscard]] Sym q_exponent(int i) const { return b(i) * b(i); }
  [[nodiscard]] bool simply_laced() const {
    return std::none_of(short_node.begin(), short_node.end(), [](bool s) { return s; });
  }
  [[nodiscard]] std::string name() const { return std::string(1, type_letter(type)) + std::to_string(rank); }
  /// Inner product (alpha_i, alpha_j) = d_i a_ij.
  [[nodiscard]] Rational inner(int i, int j) const { return halfnorm[i] * Rational(a[i][j]); }
  /// Coxeter exponent m_ij.
  [[nodiscard]] int coxeter_m(int i, int j) const {
    if (i == j) return 1;
    switch (a[i][j] * a[j][i]) {
      case 0: return 2;
      case 1: return 3;
      case 2: return 4;
      case 3: return 6;
      default: throw std::logic_error("coxeter_m: invalid Cartan product");
    }
  }
};

inline CartanData cartan_data(CartanType type, int rank) {
  CartanData cd;
  cd.type = type;
  cd.rank = rank;
  const int n = rank;
  auto bad = [&] { return ConfigError("unsupported Cartan type/rank: " + std::string(1, type_letter(type)) + std::to_string(rank)); };
  switch (type) {
    case CartanType::A: if (n < 1 || n > 8) throw bad(); break;
    case CartanType::B: case CartanType::C: if (n < 2 || n > 8) throw bad(); break;
    case CartanType::D: if (n < 4 || n > 8) throw bad(); break;
    case CartanType::G: if (n != 2) throw bad(); break;
  }
  cd.a.assign(n, std::vector<int>(n, 0));
  cd.halfnorm.assign(n, Rational(1));
  cd.short_node.assign(n, false);
  for (int i = 0; i < n; ++i) cd.a[i][i] = 2;
  auto link = [&](int i, int j) { cd.a[i][j] = cd.a[j][i] = -1; };
  switch (type) {
    case CartanType::A:
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case CartanType::B:
      // node 1 is the unique short root, attached to node 2 by a double bond
      for (int i = 1; i + 1 < n; ++i) link(i, i + 1);
      cd.a[0][1] = -2;
      cd.a[1][0] = -1;
      cd.halfnorm[0] = Rational(1, 2);
      cd.short_node[0] = true;
      break;
    case CartanType::C:
      // node 1 is the unique long root; all others short
      for (int i = 1; i + 1 < n; ++i) link(i, i + 1);
      cd.a[0][1] = -1;
      cd.a[1][0] = -2;
      for (int i = 1; i < n; ++i) {
        cd.halfnorm[i] = Rational(1, 2);
        cd.short_node[i] = true;
      }
      break;
    case CartanType::D:
      // nodes 1 and 2 are the fork, both attached to node 3
      link(0, 2);
      link(1, 2);
      for (int i = 2; i + 1 < n; ++i) link(i, i + 1);
      break;
    case CartanType::G:
      // alpha_1 long, alpha_2 short; constructed for completeness only
      cd.a[0][1] = -1;
      cd.a[1][0] = -3;
      cd.halfnorm[1] = Rational(1, 3);
      cd.short_node[1] = true;
      break;
  }
  return cd;
}

/// Reject data that the representation-level modules cannot handle.
inline void require_supported(const CartanData& cd) {
  if (cd.type == CartanType::G) throw ConfigError("type G2 is not supported by representations");
}

/// s_i(beta) = beta - <beta, alpha_i^vee> alpha_i, with <alpha_j, alpha_i^vee> = a_ij.
inline Root reflect(const CartanData& cd, int i, Root beta) {
  int pairing = 0;
  for (int j = 0; j < cd.rank; ++j) pairing += beta[j] * cd.a[i][j];
  beta[i] -= pairing;
  return beta;
}

inline Root simple_root(const CartanData& cd, int i) {
  Root r(cd.rank, 0);
  r[i] = 1;
  return r;
}

inline bool is_positive(const Root& r) {
  return std::all_of(r.begin(), r.end(), [](int c) { return c >= 0; }) &&
         std::any_of(r.begin(), r.end(), [](int c) { return c > 0; });
}
inline bool is_negative(const Root& r) {
  Root m = r;
  for (auto& c : m) c = -c;
  return is_positive(m);
}

/// All positive roots by closure under simple reflections.
inline std::vector<Root> positive_roots(const CartanData& cd) {
  std::vector<Root> roots;
  for (int i = 0; i < cd.rank; ++i) roots.push_back(simple_root(cd, i));
  for (std::size_t k = 0; k < roots.size(); ++k)
    for (int i = 0; i < cd.rank; ++i) {
      Root r = reflect(cd, i, roots[k]);
      if (is_positive(r) && std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Apply w = s_{i_1} ... s_{i_k} to beta (rightmost letter acts first).
inline Root apply_word(const CartanData& cd, const ReducedWord& w, Root beta) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) beta = reflect(cd, *it - 1, beta);
  return beta;
}

/// Deterministic reduced word for w0: extend w by the least i with w(alpha_i) > 0.
inline ReducedWord longest_word(const CartanData& cd) {
  ReducedWord w;
  for (;;) {
    int next = -1;
    for (int i = 0; i < cd.rank && next < 0; ++i)
      if (is_positive(apply_word(cd, w, simple_root(cd, i)))) next = i;
    if (next < 0) break;
    w.push_back(next + 1);
  }
  return w;
}

/// w sends every positive root to a negative one and has the right length.
inline bool is_longest_word(const CartanData& cd, const ReducedWord& w) {
  auto pos = positive_roots(cd);
  if (w.size() != pos.size()) return false;
  for (int l : w)
    if (l < 1 || l > cd.rank) return false;
  return std::all_of(pos.begin(), pos.end(), [&](const Root& r) { return is_negative(apply_word(cd, w, r)); });
}

/// Roots beta_k = s_{i_1} ... s_{i_{k-1}}(alpha_{i_k}).
inline std::vector<Root> word_roots(const CartanData& cd, const ReducedWord& w) {
  std::vector<Root> out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    ReducedWord prefix(w.begin(), w.begin() + static_cast<long>(k));
    out.push_back(apply_word(cd, prefix, simple_root(cd, w[k] - 1)));
  }
  return out;
}

/// Replace the alternating block i j i ... of length m_ij at `pos` by j i j ....
inline ReducedWord braid_move(const CartanData& cd, const ReducedWord& w, std::size_t pos) {
  if (pos + 1 >= w.size()) throw InvalidMoveError("braid_move: position out of range");
  const int i = w[pos], j = w[pos + 1];
  if (i == j || i < 1 || j < 1 || i > cd.rank || j > cd.rank) throw InvalidMoveError("braid_move: letters must be distinct nodes");
  const auto m = static_cast<std::size_t>(cd.coxeter_m(i - 1, j - 1));
  if (pos + m > w.size()) throw InvalidMoveError("braid_move: block runs past the end of the word");
  for (std::size_t k = 0; k < m; ++k)
    if (w[pos + k] != (k % 2 == 0 ? i : j)) throw InvalidMoveError("braid_move: block is not alternating of length m_ij");
  ReducedWord r = w;
  for (std::size_t k = 0; k < m; ++k) r[pos + k] = (k % 2 == 0 ? j : i);
  return r;
}

inline std::string word_str(const ReducedWord& w) {
  std::string s = "(";
  for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k]);
  return s + ")";
}

}  // namespace qrop
