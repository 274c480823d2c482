#include "fgeom/closed_forms.hpp"

#include <stdexcept>

namespace fgeom::cf {

std::array<long long, 6> valencies(long long q)
{
    return {1, (q * q - 1) * (q + 1), q - 1, (q * q - 1) * (q * q - 1), (q * q * q - q) * (q - 1) * (q - 1),
            (q * q * q - q) * (q - 1)};
}

IntMat6 intersection_matrix(int i, long long q)
{
    const long long q2 = q * q, q3 = q2 * q, q4 = q3 * q, q5 = q4 * q;
    const long long a = q - 1, b = q + 1;
    switch (i) {
    case 0: {
        IntMat6 m{};
        for (int k = 0; k < 6; ++k)
            m[k][k] = 1;
        return m;
    }
    case 1:
        return {{{0, (q2 - 1) * b, 0, 0, 0, 0},
                 {1, q2 - 2, 0, q * a, q * a * a, q * a},
                 {0, 0, 0, a * b * b, 0, 0},
                 {0, q, 1, 2 * (q2 - q - 1), q * a * a, q * a},
                 {0, b, 0, q2 - 1, q3 - q2 - 2 * q, q2 - 1},
                 {0, b, 0, q2 - 1, b * a * a, (q - 2) * b}}};
    case 2:
        return {{{0, 0, q - 1, 0, 0, 0},
                 {0, 0, 0, q - 1, 0, 0},
                 {1, 0, q - 2, 0, 0, 0},
                 {0, 1, 0, q - 2, 0, 0},
                 {0, 0, 0, 0, q - 2, 1},
                 {0, 0, 0, 0, q - 1, 0}}};
    case 3:
        return {{{0, 0, 0, (q2 - 1) * (q2 - 1), 0, 0},
                 {0, q * a, a, 2 * a * (q2 - q - 1), q * a * a * a, q * a * a},
                 {0, a * b * b, 0, (q2 - 1) * (q2 - q - 2), 0, 0},
                 {1, 2 * (q2 - q - 1), q - 2, 2 * q3 - 5 * q2 + q + 4, q * a * a * a, q * a * a},
                 {0, q2 - 1, 0, (q2 - 1) * a, q4 - 2 * q3 - q2 + 3 * q + 1, q * b * (q - 2)},
                 {0, q2 - 1, 0, (q2 - 1) * a, q * (q2 - 1) * (q - 2), (q2 - 1) * a}}};
    case 4:
        return {{{0, 0, 0, 0, (q3 - q) * a * a, 0},
                 {0, q * a * a, 0, q * a * a * a, q2 * a * a * (q - 2), q * a * a * a},
                 {0, 0, 0, 0, (q3 - q) * a * (q - 2), (q3 - q) * a},
                 {0, q * a * a, 0, q * a * a * a, q * a * (q3 - 3 * q2 + 2 * q + 1), q2 * a * (q - 2)},
                 {1, q3 - q2 - 2 * q, q - 2, q4 - 2 * q3 - q2 + 3 * q + 1, q5 - 4 * q4 + 4 * q3 + 3 * q2 - 7 * q + 1,
                  q4 - 3 * q3 + q2 + 4 * q - 1},
                 {0, b * a * a, q - 1, q * (q2 - 1) * (q - 2), q5 - 4 * q4 + 4 * q3 + 3 * q2 - 5 * q + 1,
                  q4 - 3 * q3 + q2 + 2 * q - 1}}};
    case 5:
        return {{{0, 0, 0, 0, 0, (q3 - q) * a},
                 {0, q * a, 0, q * a * a, q * a * a * a, q * (q - 2) * a},
                 {0, 0, 0, 0, (q3 - q) * a, 0},
                 {0, q * a, 0, q * a * a, q2 * a * (q - 2), q * a * a},
                 {0, q2 - 1, 1, q * b * (q - 2), q4 - 3 * q3 + q2 + 4 * q - 1, q3 - 2 * q2 - q + 1},
                 {1, (q - 2) * b, 0, (q2 - 1) * a, q4 - 3 * q3 + q2 + 2 * q - 1, q3 - 2 * q2 + q + 1}}};
    default:
        throw std::out_of_range("relation index must be in 0..5");
    }
}

RatMat6 first_eigenmatrix(long long q)
{
    const long long q2 = q * q, q3 = q2 * q;
    const long long a = q - 1, b = q + 1;
    const std::array<std::array<long long, 6>, 6> m{{{1, (q2 - 1) * b, a, (q2 - 1) * (q2 - 1), (q3 - q) * a * a, (q3 - q) * a},
                                                     {1, q2 - q - 1, a, q3 - 2 * q2 + 1, -q * a * a, -q * a},
                                                     {1, q2 - 1, -1, -q2 + 1, 0, 0},
                                                     {1, -b, a, -q2 + 1, q * a, q},
                                                     {1, -b, -1, b, -q * b, q * b},
                                                     {1, -b, -1, b, q * a, -q * a}}};
    RatMat6 r;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            r[i][j] = m[i][j];
    return r;
}

RatMat6 second_eigenmatrix(long long q)
{
    const long long q2 = q * q, q3 = q2 * q;
    const long long a = q - 1, b = q + 1;
    using R = Rational;
    return {{{R(1), R(a * b * b), R(q3 * a), R(q * a * a * b), R(q2 * a * a * a, 2), R(q2 * b * a * a, 2)},
             {R(1), R(q2 - q - 1), R(q3 * a, b), R(-q * a), R(-q2 * a * a, 2 * b), R(-q2 * a, 2)},
             {R(1), R(a * b * b), R(-q3), R(q * a * a * b), R(-q2 * a * a, 2), R(-q2 * b * a, 2)},
             {R(1), R(q2 - q - 1), R(-q3, b), R(-q * a), R(q2 * a, 2 * b), R(q2, 2)},
             {R(1), R(-b), R(0), R(q), R(-q2, 2), R(q2, 2)},
             {R(1), R(-b), R(0), R(q), R(q2 * a, 2), R(-q2 * a, 2)}}};
}

std::array<long long, 6> multiplicities(long long q)
{
    const auto Q = second_eigenmatrix(q);
    std::array<long long, 6> m{};
    for (int i = 0; i < 6; ++i) {
        if (Q[0][i].denominator() != 1)
            throw std::logic_error("non-integral multiplicity");
        m[i] = Q[0][i].numerator();
    }
    return m;
}

std::array<long long, 6> conic_transform(long long q)
{
    const long long q2 = q * q, q3 = q2 * q;
    return {q2, 0, q3 * (q - 1), q2 * (q2 - 1), q3 * (q - 1) * (q - 1), 0};
}

std::array<long long, 4> quotient_srg(long long q)
{
    return {q * q * q * q, (q * q - 1) * (q + 1), 2 * q * q - q - 2, q * (q + 1)};
}

} // namespace fgeom::cf
