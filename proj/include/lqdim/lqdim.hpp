// Umbrella header.
#pragma once

#include "lqdim/ball.hpp"
#include "lqdim/convolve.hpp"
#include "lqdim/dimension.hpp"
#include "lqdim/dyadic.hpp"
#include "lqdim/errors.hpp"
#include "lqdim/experiments.hpp"
#include "lqdim/generate.hpp"
#include "lqdim/measure_spec.hpp"
#include "lqdim/norms.hpp"
#include "lqdim/regularity.hpp"
#include "lqdim/sumsets.hpp"
#include "lqdim/thickness.hpp"
#include "lqdim/uniformity.hpp"
