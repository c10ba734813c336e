#pragma once

#include <optional>

namespace ballotlens::special {

// Regularized incomplete gamma P(a,x) (lower) and Q(a,x) (upper).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a,b).
double incbeta(double a, double b, double x);

// Standard normal CDF and two-sided survival 2*(1-Phi(|z|)).
double normal_cdf(double z);
double normal_two_sided(double z);

enum class Dist { Normal, StudentT, ChiSquare, F };

// p-value for a test statistic: two-sided for Normal/StudentT,
// upper tail for ChiSquare/F. df2 only used by F.
// Throws InvalidDf when a required df is missing or non-positive.
double tail_probability(Dist dist, double stat, std::optional<double> df1 = std::nullopt,
                        std::optional<double> df2 = std::nullopt);

// Upper quantile helpers (bisection on the tail functions).
double student_t_quantile(double two_sided_p, double df);  // t with P(|T|>t)=p

}  // namespace ballotlens::special
