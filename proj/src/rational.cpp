#include "mgs/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace mgs {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto slash = s.find('/');
    auto check_int = [&](const std::string& part) {
        std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i >= part.size()) throw std::invalid_argument("malformed rational: " + s);
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') throw std::invalid_argument("malformed rational: " + s);
    };
    Rational q;
    if (slash == std::string::npos) {
        check_int(s);
        q = mpz_class(s[0] == '+' ? s.substr(1) : s);
    } else {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        check_int(num);
        check_int(den);
        mpz_class d(den[0] == '+' ? den.substr(1) : den);
        if (d == 0) throw std::invalid_argument("zero denominator: " + s);
        q = Rational(mpz_class(num[0] == '+' ? num.substr(1) : num), d);
        q.canonicalize();
    }
    return q;
}

std::string format_rational(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rationalize(double value, std::int64_t max_denominator) {
    if (!std::isfinite(value)) throw std::invalid_argument("cannot rationalize non-finite value");
    if (max_denominator < 1) throw std::invalid_argument("denominator bound must be >= 1");
    // Exact binary value of the double, then continued-fraction descent.
    Rational x(value);
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Rational rest = x;
    const mpz_class bound = mpz_class(std::to_string(max_denominator));
    while (true) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
        mpz_class q2 = a * q1 + q0;
        if (q2 > bound) {
            // Best semiconvergent within the bound.
            mpz_class t = (bound - q0) / q1;
            Rational semi(t * p1 + p0, t * q1 + q0);
            Rational conv(p1, q1);
            semi.canonicalize();
            conv.canonicalize();
            return abs(semi - x) < abs(conv - x) ? semi : conv;
        }
        mpz_class p2 = a * p1 + p0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        Rational frac = rest - a;
        if (frac == 0) break;
        rest = 1 / frac;
    }
    Rational r(p1, q1);
    r.canonicalize();
    return r;
}

Rational round_to_grid(double value, std::int64_t denominator) {
    if (!std::isfinite(value)) throw std::invalid_argument("cannot rationalize non-finite value");
    if (denominator < 1) throw std::invalid_argument("grid denominator must be >= 1");
    Rational q(static_cast<long>(std::llround(value * static_cast<double>(denominator))),
               static_cast<unsigned long>(denominator));
    q.canonicalize();
    return q;
}

}  // namespace mgs
