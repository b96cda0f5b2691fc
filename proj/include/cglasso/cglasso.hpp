#pragma once

#include <cglasso/errors.hpp>
#include <cglasso/dense.hpp>
#include <cglasso/spmat.hpp>
#include <cglasso/matrix_market.hpp>
#include <cglasso/chordal.hpp>
#include <cglasso/cholesky.hpp>
#include <cglasso/maxdet.hpp>
#include <cglasso/glasso.hpp>
#include <cglasso/generate.hpp>
#include <cglasso/reference.hpp>
