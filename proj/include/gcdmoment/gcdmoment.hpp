#pragma once

// Exact and floating moments of the gcd random variable
// (k_1,...,k_r) |-> gcd(n, k_1 k_2 ... k_r) over uniform tuples in {1..n}^r.

#include "gcdmoment/convergence.hpp"
#include "gcdmoment/counting.hpp"
#include "gcdmoment/moments.hpp"
#include "gcdmoment/numeric.hpp"
#include "gcdmoment/numth.hpp"
#include "gcdmoment/rng.hpp"
#include "gcdmoment/scalar.hpp"
#include "gcdmoment/series.hpp"
