#pragma once

#include "cproots/cpmap.hpp"

// Small maps on M_2 and M_3 with known root structure.
namespace cproots::fixtures {

// [[a,b],[c,d]] -> [[d,0],[0,a]]
CMap swap_diagonal_map();

// [[a,b],[c,d]] -> [[a,0],[0,d]]
CMap diagonal_restriction_map();

// [[a,b],[c,d]] -> [[a,s b],[s c,d]], UNCP for |s| <= 1
CMap offdiag_scaling_map(double s);

// [[a,b],[c,d]] -> [[d,s c],[s b,a]], UNCP for |s| <= 1
CMap swap_offdiag_scaling_map(double s);

// x -> e11 x e11 + q x q on M_3 with q = e22 + e33
CMap corner_pinching_map();

// x -> x^T on M_d (not CP for d >= 2)
CMap transpose_map(int d);

}  // namespace cproots::fixtures
