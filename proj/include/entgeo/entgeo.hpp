#pragma once

// Umbrella header for the entropic-geometry entanglement library.

#include "entgeo/matrix.hpp"
#include "entgeo/state.hpp"
#include "entgeo/entropy.hpp"
#include "entgeo/geometry.hpp"
#include "entgeo/generators.hpp"
#include "entgeo/oracles.hpp"
#include "entgeo/roof.hpp"
#include "entgeo/spec_io.hpp"
#include "entgeo/experiment.hpp"
