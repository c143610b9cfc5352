#pragma once

// Datatype declarations realising arbitrary sort-dependency digraphs, and a
// brute-force walk oracle for recursion.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "chccomp/script.hpp"

namespace testing {

using Digraph = std::vector<std::vector<bool>>;

inline Digraph digraph_from_mask(int n, long mask) {
  Digraph edge(n, std::vector<bool>(n));
  for (int i = 0; i < n * n; ++i) edge[i / n][i % n] = (mask >> i) & 1;
  return edge;
}

// Each edge becomes a selector of the source sort, sometimes wrapped in an
// array; every sort also gets an Int field and maybe a nullary constructor.
inline std::vector<chccomp::DatatypeDecl> realise_digraph(const Digraph& edge, std::mt19937& rng) {
  using chccomp::Sort;
  int n = static_cast<int>(edge.size());
  auto name = [](int i) { return "s" + std::to_string(i); };
  std::vector<chccomp::DatatypeDecl> decls;
  for (int a = 0; a < n; ++a) {
    chccomp::DatatypeDecl d{name(a), {}};
    chccomp::Constructor main{"mk" + std::to_string(a), {}};
    int field = 0;
    auto add = [&](Sort s) {
      main.selectors.push_back(
          chccomp::Selector{"f" + std::to_string(a) + "_" + std::to_string(field++), std::move(s)});
    };
    add(Sort::simple("Int"));
    for (int b = 0; b < n; ++b) {
      if (!edge[a][b]) continue;
      switch (rng() % 3) {
        case 0: add(Sort::simple(name(b))); break;
        case 1: add(Sort{"Array", {}, {Sort::simple("Int"), Sort::simple(name(b))}}); break;
        default: add(Sort{"Array", {}, {Sort::simple(name(b)), Sort::simple("Bool")}}); break;
      }
    }
    if (rng() % 2) d.constructors.push_back(chccomp::Constructor{"nil" + std::to_string(a), {}});
    d.constructors.push_back(std::move(main));
    decls.push_back(std::move(d));
  }
  return decls;
}

inline bool walk_returns(const Digraph& edge, int start, int at, int len) {
  int n = static_cast<int>(edge.size());
  if (len > n) return false;
  for (int b = 0; b < n; ++b) {
    if (!edge[at][b]) continue;
    if (b == start) return true;
    if (walk_returns(edge, start, b, len + 1)) return true;
  }
  return false;
}

/// True when some walk of at most n edges returns to its starting sort.
inline bool oracle_recursive(const Digraph& edge) {
  for (int s = 0; s < static_cast<int>(edge.size()); ++s) {
    if (walk_returns(edge, s, s, 1)) return true;
  }
  return false;
}

inline Digraph random_digraph(int n, double density, std::mt19937& rng) {
  std::bernoulli_distribution coin(density);
  Digraph edge(n, std::vector<bool>(n));
  for (auto& row : edge) {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = coin(rng);
  }
  return edge;
}


/// Calls `fn(mask)` once per isomorphism class of digraphs (self-loops
/// allowed) on n <= 5 nodes; bit i*n+j is the edge i -> j. A class is
/// represented by its smallest mask among labelings whose (out, in) degree
/// pairs are sorted.
template <typename F>
long for_each_unlabeled_digraph(int n, F fn) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto permute = [n](long mask, const std::vector<int>& pi) {
    long out = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if ((mask >> (i * n + j)) & 1) out |= 1L << (pi[i] * n + pi[j]);
      }
    }
    return out;
  };
  long classes = 0;
  for (long mask = 0; mask < (1L << (n * n)); ++mask) {
    int deg[6] = {};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if ((mask >> (i * n + j)) & 1) deg[i] += 8, deg[j] += 1;
      }
    }
    bool sorted = true;
    for (int i = 1; i < n && sorted; ++i) sorted = deg[i - 1] <= deg[i];
    if (!sorted) continue;
    bool minimal = true;
    for (const auto& pi : perms) {
      bool keeps = true;
      for (int i = 0; i < n && keeps; ++i) keeps = deg[pi[i]] == deg[i];
      if (keeps && permute(mask, pi) < mask) {
        minimal = false;
        break;
      }
    }
    if (!minimal) continue;
    ++classes;
    fn(mask);
  }
  return classes;
}

}  // namespace testing
