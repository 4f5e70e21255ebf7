#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace violet::impact {

/// Longest common subsequence by Myers' O((N+M)D) greedy diff.
///
/// Returns matched index pairs (i into a, j into b), increasing in both.
template <typename T>
std::vector<std::pair<std::size_t, std::size_t>> lcs_pairs(const std::vector<T>& a,
                                                           const std::vector<T>& b) {
  const long n = static_cast<long>(a.size());
  const long m = static_cast<long>(b.size());
  const long max = n + m;
  const long offset = max + 1;
  std::vector<long> v(static_cast<std::size_t>(2 * max + 3), 0);
  std::vector<std::vector<long>> history;  // v before each round d

  long found_d = -1;
  for (long d = 0; d <= max && found_d < 0; ++d) {
    history.push_back(v);
    for (long k = -d; k <= d; k += 2) {
      long x;
      if (k == -d || (k != d && v[static_cast<std::size_t>(offset + k - 1)] <
                                    v[static_cast<std::size_t>(offset + k + 1)]))
        x = v[static_cast<std::size_t>(offset + k + 1)];  // step down (insertion)
      else
        x = v[static_cast<std::size_t>(offset + k - 1)] + 1;  // step right (deletion)
      long y = x - k;
      while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
        ++x;
        ++y;
      }
      v[static_cast<std::size_t>(offset + k)] = x;
      if (x >= n && y >= m) {
        found_d = d;
        break;
      }
    }
  }

  // Walk the recorded rounds backwards, collecting diagonal (matching) moves.
  std::vector<std::pair<std::size_t, std::size_t>> out;
  long x = n, y = m;
  for (long d = found_d; d >= 0; --d) {
    const auto& vd = history[static_cast<std::size_t>(d)];
    long k = x - y;
    long prev_k;
    if (d == 0) {
      prev_k = 0;
    } else if (k == -d || (k != d && vd[static_cast<std::size_t>(offset + k - 1)] <
                                         vd[static_cast<std::size_t>(offset + k + 1)])) {
      prev_k = k + 1;
    } else {
      prev_k = k - 1;
    }
    long prev_x = d == 0 ? 0 : vd[static_cast<std::size_t>(offset + prev_k)];
    long prev_y = prev_x - prev_k;
    // Start of the snake after the non-diagonal move.
    long sx = d == 0 ? 0 : (prev_k == k + 1 ? prev_x : prev_x + 1);
    long sy = sx - k;
    while (x > sx && y > sy) {
      --x;
      --y;
      out.emplace_back(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    }
    x = prev_x;
    y = prev_y;
  }
  return {out.rbegin(), out.rend()};
}

template <typename T>
std::size_t lcs_length(const std::vector<T>& a, const std::vector<T>& b) {
  return lcs_pairs(a, b).size();
}

}  // namespace violet::impact
