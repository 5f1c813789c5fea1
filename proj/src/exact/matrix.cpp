#include "qt/exact/matrix.hpp"

#include <algorithm>

#include "qt/errors.hpp"

namespace qt::exact {

Integer AbelianInvariants::order() const {
    Integer n = 1;
    for (const auto& d : divisors) n *= d;
    return n;
}

std::size_t AbelianInvariants::rank_at(const Integer& ell) const {
    std::size_t r = 0;
    for (const auto& d : divisors) {
        if (d == 0 || mpz_divisible_p(d.get_mpz_t(), ell.get_mpz_t())) ++r;
    }
    return r;
}

std::string to_string(const AbelianInvariants& g) {
    std::string s = "[";
    for (std::size_t i = 0; i < g.divisors.size(); ++i) {
        if (i) s += ",";
        s += g.divisors[i].get_str();
    }
    return s + "]";
}

AbelianInvariants abelian_from_cyclic(const std::vector<Integer>& cyclic_orders) {
    const std::size_t n = cyclic_orders.size();
    IntMatrix m(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = cyclic_orders[i];
    return smith_invariants(m);
}

namespace {

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    for (auto& row : m) std::swap(row[a], row[b]);
}

}  // namespace

std::vector<Integer> smith_diagonal(IntMatrix m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    const std::size_t n = std::min(rows, cols);
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // pivot: smallest nonzero |entry| in the trailing block
            std::size_t pr = rows, pc = cols;
            for (std::size_t i = t; i < rows; ++i) {
                for (std::size_t j = t; j < cols; ++j) {
                    if (m[i][j] != 0 && (pr == rows || abs(m[i][j]) < abs(m[pr][pc]))) {
                        pr = i;
                        pc = j;
                    }
                }
            }
            if (pr == rows) break;
            std::swap(m[t], m[pr]);
            swap_cols(m, t, pc);
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (m[i][t] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
                for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
                if (m[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (m[t][j] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
                for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
                if (m[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility of the remaining block by the pivot
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (!mpz_divisible_p(m[i][j].get_mpz_t(), m[t][t].get_mpz_t())) {
                        bad = i;
                        break;
                    }
                }
            }
            if (bad == rows) break;
            for (std::size_t j = t; j < cols; ++j) m[t][j] += m[bad][j];
        }
    }
    std::vector<Integer> diag(n);
    for (std::size_t t = 0; t < n; ++t) diag[t] = abs(m[t][t]);
    return diag;
}

AbelianInvariants smith_invariants(const IntMatrix& m) {
    const std::size_t rows = m.size();
    AbelianInvariants out;
    if (rows == 0) return out;
    auto diag = smith_diagonal(m);
    std::vector<Integer> zeros;
    for (const auto& d : diag) {
        if (d == 0) {
            zeros.push_back(0);
        } else if (d != 1) {
            out.divisors.push_back(d);
        }
    }
    for (std::size_t k = diag.size(); k < rows; ++k) zeros.push_back(0);
    out.divisors.insert(out.divisors.end(), zeros.begin(), zeros.end());
    return out;
}

IntMatrix hermite_normal_form(IntMatrix a) {
    const std::size_t rows = a.size();
    if (rows == 0) return a;
    const std::size_t cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        // Euclid down column c among rows r..end
        for (;;) {
            std::size_t piv = rows;
            for (std::size_t i = r; i < rows; ++i) {
                if (a[i][c] != 0 && (piv == rows || abs(a[i][c]) < abs(a[piv][c]))) piv = i;
            }
            if (piv == rows) break;
            std::swap(a[r], a[piv]);
            bool done = true;
            for (std::size_t i = r + 1; i < rows; ++i) {
                if (a[i][c] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
                for (std::size_t j = c; j < cols; ++j) a[i][j] -= q * a[r][j];
                if (a[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0) {
            for (auto& x : a[r]) x = -x;
        }
        for (std::size_t i = 0; i < r; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
            if (q != 0) {
                for (std::size_t j = c; j < cols; ++j) a[i][j] -= q * a[r][j];
            }
        }
        ++r;
    }
    a.resize(r);
    return a;
}

Integer determinant(IntMatrix m) {
    // Bareiss fraction-free elimination
    const std::size_t n = m.size();
    if (n == 0) return 1;
    int sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && m[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(m[k], m[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

Rat determinant(RatMatrix m) {
    const std::size_t n = m.size();
    Rat det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t s = k;
        while (s < n && m[s][k] == 0) ++s;
        if (s == n) return 0;
        if (s != k) {
            std::swap(m[k], m[s]);
            det = -det;
        }
        det *= m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k] == 0) continue;
            Rat f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

RatMatrix inverse(const RatMatrix& m) {
    const std::size_t n = m.size();
    RatMatrix a = m;
    RatMatrix inv(n, std::vector<Rat>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t s = k;
        while (s < n && a[s][k] == 0) ++s;
        if (s == n) throw DomainError("singular matrix");
        std::swap(a[k], a[s]);
        std::swap(inv[k], inv[s]);
        Rat pivot = a[k][k];
        for (std::size_t j = 0; j < n; ++j) {
            a[k][j] /= pivot;
            inv[k][j] /= pivot;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a[i][k] == 0) continue;
            Rat f = a[i][k];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= f * a[k][j];
                inv[i][j] -= f * inv[k][j];
            }
        }
    }
    return inv;
}

RatMatrix multiply(const RatMatrix& a, const RatMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    RatMatrix c(n, std::vector<Rat>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    IntMatrix c(n, std::vector<Integer>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

IntMatrix identity_matrix(std::size_t n) {
    IntMatrix m(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

}  // namespace qt::exact
