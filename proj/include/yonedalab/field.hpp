#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace yl {

// Prime field F_p, p < 2^31. The modulus is carried by value so that
// several fields can coexist in one process.
struct Fp {
    using value_type = std::uint32_t;

    std::uint32_t p = 2;

    Fp() = default;
    explicit Fp(std::uint32_t prime) : p(prime) {
        if (prime < 2 || prime >= (1u << 31) || !is_prime(prime))
            throw std::invalid_argument("characteristic " + std::to_string(prime) + " is not a prime below 2^31");
    }

    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    std::uint32_t characteristic() const { return p; }
    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(value_type a) const { return a == 0; }
    bool is_one(value_type a) const { return a == 1; }

    value_type add(value_type a, value_type b) const {
        std::uint32_t s = a + b;
        return s >= p ? s - p : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p - b; }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type mul(value_type a, value_type b) const {
        return static_cast<value_type>((static_cast<std::uint64_t>(a) * b) % p);
    }
    value_type inv(value_type a) const {
        if (a == 0) throw std::domain_error("division by zero in F_p");
        // extended Euclid
        std::int64_t t = 0, nt = 1, r = p, nr = a;
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (t < 0) t += p;
        return static_cast<value_type>(t);
    }
    value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

    value_type from_int(long long v) const {
        long long m = v % static_cast<long long>(p);
        if (m < 0) m += p;
        return static_cast<value_type>(m);
    }
    value_type from_ratio(const mpq_class& q) const {
        mpz_class n = q.get_num() % p, d = q.get_den() % p;
        if (n < 0) n += p;
        if (d == 0) throw std::domain_error("denominator vanishes mod " + std::to_string(p));
        return div(static_cast<value_type>(n.get_ui()), static_cast<value_type>(d.get_ui()));
    }
    std::string str(value_type a) const { return std::to_string(a); }
    // symmetric representative, handy for readable output
    long long lift(value_type a) const { return a > p / 2 ? static_cast<long long>(a) - p : a; }

    bool operator==(const Fp& o) const { return p == o.p; }
};

// The rationals with GMP arbitrary precision; mpq_class keeps values canonical.
struct Qf {
    using value_type = mpq_class;

    std::uint32_t characteristic() const { return 0; }
    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(const value_type& a) const { return sgn(a) == 0; }
    bool is_one(const value_type& a) const { return a == 1; }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const {
        if (sgn(a) == 0) throw std::domain_error("division by zero in Q");
        return 1 / a;
    }
    value_type div(const value_type& a, const value_type& b) const { return a * inv(b); }
    value_type from_int(long long v) const { return mpq_class(mpz_class(std::to_string(v))); }
    value_type from_ratio(const mpq_class& q) const { return q; }
    std::string str(const value_type& a) const { return a.get_str(); }

    bool operator==(const Qf&) const { return true; }
};

} // namespace yl
