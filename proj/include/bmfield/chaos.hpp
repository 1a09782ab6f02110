#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bmfield/functional.hpp"
#include "bmfield/multiindex.hpp"
#include "bmfield/parallel.hpp"

namespace bm {

struct ChaosTerm {
    MultiIndex a;
    double c = 0.0;
};

// Truncated orthogonal expansion of a functional in multivariate Hermite
// polynomials: G(x) ~ sum_q sum_{|a|=q} c_a H_a(x). Coefficients below the
// drop threshold are omitted from `levels` (level 0 stays only for
// non-centered G); the level-0 coefficient estimate is always kept in `mean`.
struct ChaosExpansion {
    int m = 0;
    int q_max = 0;
    std::map<int, std::vector<ChaosTerm>> levels;
    double captured_mass = 0.0;        // sum over listed terms of c^2 a!
    double total_mass_estimate = 0.0;  // quadrature of G^2
    double mean = 0.0;                 // level-0 coefficient (integral of G)

    bool has_level(int q) const { return levels.count(q) != 0; }
    double residual_mass() const;  // mass not captured by the listed terms
};

struct ChaosOptions {
    int q_max = 8;
    int quadrature_order = 64;      // per axis; doubled for discontinuous G
    double drop_threshold = 1e-12;  // drop when |c| * sqrt(a!) falls below
    Exec exec = Exec::Parallel;
};

// Tensorized Gauss-Hermite projection; m <= 4, q_max <= 12,
// quadrature_order >= 2 q_max.
ChaosExpansion chaos_coefficients(const Functional& g, int m, const ChaosOptions& opts = {});

// Smallest q >= 1 carrying a coefficient with |c| > tol.
int hermite_rank(const ChaosExpansion& e, double tol = 1e-9);

// Level-q partial evaluation sum_{|a|=q} c_a H_a(x).
double evaluate_level(const ChaosExpansion& e, int q, std::span<const double> x);

// Sum of all levels q >= 1 (the centered truncation of G).
double evaluate_truncated(const ChaosExpansion& e, std::span<const double> x);

std::string expansion_to_json(const ChaosExpansion& e);

}  // namespace bm
