#pragma once

// Independent reference routines for the tests. Nothing here calls into the
// elimination kernels or the normal-form machinery of the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <tuple>
#include <vector>

namespace oracle {

using BigRational = boost::multiprecision::cpp_rational;

inline std::int64_t mod(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

inline std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t p) {
  __int128 r = 1, x = mod(b, p);
  while (e > 0) {
    if (e & 1) r = r * x % p;
    x = x * x % p;
    e >>= 1;
  }
  return static_cast<std::int64_t>(r);
}

/// Textbook row reduction mod p on a copy; inverse by Fermat.
inline std::size_t naive_rank_mod_p(std::vector<std::vector<std::int64_t>> a, std::int64_t p) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t i = rank; i < rows; ++i) {
      if (mod(a[i][c], p) != 0) {
        sel = i;
        break;
      }
    }
    if (sel == rows) continue;
    std::swap(a[sel], a[rank]);
    const std::int64_t inv = pow_mod(a[rank][c], p - 2, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank) continue;
      const std::int64_t f = static_cast<std::int64_t>(static_cast<__int128>(mod(a[i][c], p)) * inv % p);
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        a[i][j] = mod(static_cast<std::int64_t>((static_cast<__int128>(a[i][j]) -
                                                 static_cast<__int128>(f) * mod(a[rank][j], p)) % p),
                      p);
      }
    }
    ++rank;
  }
  return rank;
}

/// Row reduction over Q with plain rational division.
inline std::size_t naive_rank_rational(std::vector<std::vector<BigRational>> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t i = rank; i < rows; ++i) {
      if (a[i][c] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == rows) continue;
    std::swap(a[sel], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      const BigRational f = a[i][c] / a[rank][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

/// #{(a,b,c) : a+b+c = n, 0 <= c < d} by enumeration.
inline std::size_t enumerate_hilbert(int d, int n) {
  std::size_t count = 0;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; a + b <= n; ++b) {
      if (n - a - b < d) ++count;
    }
  }
  return count;
}

/// A polynomial as exponent-triple -> integer coefficient (mod p when p > 0).
using IntPoly = std::map<std::tuple<int, int, int>, std::int64_t>;

/// Normal form by repeatedly replacing one factor Z^d with -X^d - Y^d.
inline IntPoly substitute_normal_form(IntPoly f, int d, std::int64_t p) {
  auto reduce = [&](std::int64_t v) { return p > 0 ? mod(v, p) : v; };
  while (true) {
    auto it = std::find_if(f.begin(), f.end(), [&](const auto& t) { return std::get<2>(t.first) >= d; });
    if (it == f.end()) break;
    auto [a, b, c] = it->first;
    const std::int64_t coeff = it->second;
    f.erase(it);
    for (auto key : {std::tuple{a + d, b, c - d}, std::tuple{a, b + d, c - d}}) {
      f[key] = reduce(f[key] - coeff);
      if (f[key] == 0) f.erase(key);
    }
  }
  return f;
}

/// Colength of K[x,y,z]/(x^a,y^a,z^a,F) as dim A - sum_n rank(F: A_{n-d} -> A_n),
/// with A = K[x,y,z]/(x^a,y^a,z^a) in its monomial basis, over F_p.
inline std::size_t colength_via_monomial_quotient(int d, int a, std::int64_t p) {
  auto basis = [&](int n) {
    std::vector<std::tuple<int, int, int>> out;
    for (int x = 0; x < a; ++x) {
      for (int y = 0; y < a; ++y) {
        const int z = n - x - y;
        if (z >= 0 && z < a) out.emplace_back(x, y, z);
      }
    }
    return out;
  };
  std::size_t total = 0;
  for (int n = 0; n <= 3 * (a - 1); ++n) {
    const auto target = basis(n);
    total += target.size();
    if (n < d) continue;
    const auto source = basis(n - d);
    if (source.empty() || target.empty()) continue;
    std::map<std::tuple<int, int, int>, std::size_t> index;
    for (std::size_t i = 0; i < target.size(); ++i) index[target[i]] = i;
    std::vector<std::vector<std::int64_t>> m(target.size(), std::vector<std::int64_t>(source.size(), 0));
    for (std::size_t j = 0; j < source.size(); ++j) {
      auto [x, y, z] = source[j];
      for (auto t : {std::tuple{x + d, y, z}, std::tuple{x, y + d, z}, std::tuple{x, y, z + d}}) {
        auto it = index.find(t);
        if (it != index.end()) m[it->second][j] += 1;
      }
    }
    total -= naive_rank_mod_p(m, p);
  }
  return total;
}

inline std::vector<std::uint64_t> trial_division_primes_in_progression(std::uint64_t residue, std::uint64_t modulus,
                                                                     std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; out.size() < count && n < 100000000; ++n) {
    bool prime = true;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
      if (n % f == 0) {
        prime = false;
        break;
      }
    }
    if (prime && n % modulus == residue % modulus) out.push_back(n);
  }
  return out;
}

}  // namespace oracle
