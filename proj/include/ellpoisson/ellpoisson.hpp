#ifndef ELLPOISSON_ELLPOISSON_HPP
#define ELLPOISSON_ELLPOISSON_HPP

#include "types.hpp"
#include "theta.hpp"
#include "polynomial.hpp"
#include "poisson.hpp"
#include "fo_algebra.hpp"
#include "cech.hpp"
#include "rational_matrix.hpp"
#include "homological.hpp"
#include "leaves.hpp"
#include "report.hpp"
#include "commands.hpp"

#endif
