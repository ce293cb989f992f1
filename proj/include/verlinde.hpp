#pragma once

#include "verlinde/characters.hpp"
#include "verlinde/cyclotomic.hpp"
#include "verlinde/errors.hpp"
#include "verlinde/fixed_points.hpp"
#include "verlinde/fusion.hpp"
#include "verlinde/galois.hpp"
#include "verlinde/generators.hpp"
#include "verlinde/numtheory.hpp"
#include "verlinde/weight_lattice.hpp"
