#pragma once

// Test-only brute-force oracles: exhaustive enumeration of perfect matchings
// of small bipartite graphs. Independent of the Kasteleyn pipeline.

#include <functional>
#include <map>
#include <vector>

namespace temb::oracle {

struct EdgeRef {
  int b, w;
  double weight;  // unsigned
};

struct MatchingStats {
  double Z = 0;                              // weighted partition function
  std::map<std::pair<int, int>, double> edge_weight_sum;  // sum over matchings containing e
  long count = 0;                            // number of matchings

  double edge_probability(int b, int w) const {
    auto it = edge_weight_sum.find({b, w});
    return it == edge_weight_sum.end() ? 0.0 : it->second / Z;
  }
};

// Enumerates all perfect matchings by recursing over white vertices.
inline MatchingStats enumerate_matchings(int n_black, int n_white,
                                         const std::vector<EdgeRef>& edges) {
  MatchingStats st;
  if (n_black != n_white) return st;
  std::vector<std::vector<std::pair<int, double>>> adj(n_white);
  for (const auto& e : edges) adj[e.w].push_back({e.b, e.weight});
  std::vector<char> used(n_black, 0);
  std::vector<int> match(n_white, -1);
  std::function<void(int, double)> rec = [&](int w, double prod) {
    if (w == n_white) {
      st.Z += prod;
      st.count += 1;
      for (int ww = 0; ww < n_white; ++ww) {
        auto key = std::make_pair(match[ww], ww);
        st.edge_weight_sum[key] += prod;
      }
      return;
    }
    for (auto [b, wt] : adj[w]) {
      if (used[b]) continue;
      used[b] = 1;
      match[w] = b;
      rec(w + 1, prod * wt);
      used[b] = 0;
      match[w] = -1;
    }
  };
  rec(0, 1.0);
  return st;
}

}  // namespace temb::oracle
