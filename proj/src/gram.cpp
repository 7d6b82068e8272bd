#include "erglab/gram.hpp"

#include "erglab/errors.hpp"

namespace erglab {

namespace {

void require_symmetric(const RatMatrix& m) {
  for (const auto& row : m)
    if (row.size() != m.size()) throw ValidationError("gram_check: matrix is not square");
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i]) throw ValidationError("gram_check: matrix is not symmetric");
}

// Solves a x = b for a symmetric positive definite rational a.
std::vector<Rat> solve(RatMatrix a, std::vector<Rat> b) {
  std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Rat f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<Rat> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rat s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

// Positive semidefiniteness by LDL^T with largest-diagonal pivoting.
GramCertificate psd(const RatMatrix& a) {
  std::size_t n = a.size();
  GramCertificate cert;
  RatMatrix w = a;  // Schur complement lives on the not-yet-eliminated indices
  std::vector<std::size_t> done, rest;
  for (std::size_t i = 0; i < n; ++i) rest.push_back(i);

  auto fail = [&](std::vector<Rat> v) {
    // v lives on `rest`; extend by x_P = -A_PP^{-1} A_PR v so x^T A x = v^T S v.
    std::vector<Rat> x(n);
    for (std::size_t r = 0; r < rest.size(); ++r) x[rest[r]] = v[r];
    if (!done.empty()) {
      RatMatrix app(done.size(), std::vector<Rat>(done.size()));
      std::vector<Rat> rhs(done.size());
      for (std::size_t i = 0; i < done.size(); ++i) {
        for (std::size_t j = 0; j < done.size(); ++j) app[i][j] = a[done[i]][done[j]];
        for (std::size_t r = 0; r < rest.size(); ++r) rhs[i] -= a[done[i]][rest[r]] * v[r];
      }
      auto xp = solve(std::move(app), std::move(rhs));
      for (std::size_t i = 0; i < done.size(); ++i) x[done[i]] = xp[i];
    }
    cert.witness_value = quadratic_form(a, x);
    if (cert.witness_value >= 0) throw IdentityViolation("gram_check: witness back-substitution failed");
    cert.witness = std::move(x);
    cert.pass = false;
    return cert;
  };

  while (!rest.empty()) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < rest.size(); ++r)
      if (w[rest[r]][rest[r]] > w[rest[best]][rest[best]]) best = r;
    std::size_t p = rest[best];
    const Rat d = w[p][p];
    if (d < 0) {
      std::vector<Rat> v(rest.size());
      v[best] = 1;
      return fail(std::move(v));
    }
    if (d == 0) {
      // Every remaining diagonal is <= 0: a negative one fails directly, and
      // with all of them 0 any off-diagonal entry breaks PSD.
      for (std::size_t r = 0; r < rest.size(); ++r)
        if (w[rest[r]][rest[r]] < 0) {
          std::vector<Rat> v(rest.size());
          v[r] = 1;
          return fail(std::move(v));
        }
      for (std::size_t r = 0; r < rest.size(); ++r)
        for (std::size_t s = r + 1; s < rest.size(); ++s) {
          const Rat& o = w[rest[r]][rest[s]];
          if (o != 0) {
            std::vector<Rat> v(rest.size());
            v[r] = 1;
            v[s] = o > 0 ? -1 : 1;
            return fail(std::move(v));
          }
        }
      cert.pass = true;
      return cert;
    }
    cert.pivots.push_back(d);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
    for (std::size_t i : rest) {
      if (w[i][p] == 0) continue;
      Rat f = w[i][p] / d;
      for (std::size_t j : rest) w[i][j] -= f * w[p][j];
    }
    done.push_back(p);
  }
  cert.pass = true;
  return cert;
}

}  // namespace

Rat quadratic_form(const RatMatrix& m, const std::vector<Rat>& a) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[i] * a[j] * m[i][j];
  }
  return s;
}

GramCertificate gram_check(const RatMatrix& m, Definiteness mode) {
  require_symmetric(m);
  if (mode == Definiteness::positive) return psd(m);

  std::size_t n = m.size();
  if (n == 0) return GramCertificate{true, {}, {}, 0};
  // B = -1/2 C M C with C = I - 11^T/n.
  std::vector<Rat> row_mean(n);
  Rat all_mean = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += m[i][j];
    all_mean += row_mean[i];
    row_mean[i] /= n;
  }
  all_mean /= n * n;
  RatMatrix b(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i][j] = -(m[i][j] - row_mean[i] - row_mean[j] + all_mean) / 2;

  GramCertificate cert = psd(b);
  if (cert.pass) return cert;
  Rat mean = 0;
  for (const auto& v : cert.witness) mean += v;
  mean /= n;
  for (auto& v : cert.witness) v -= mean;
  cert.witness_value = quadratic_form(m, cert.witness);
  if (cert.witness_value <= 0) throw IdentityViolation("gram_check: centered witness lost its sign");
  return cert;
}

}  // namespace erglab
