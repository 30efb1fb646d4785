#pragma once

// Umbrella header.

#include "pathpol/channels.hpp"
#include "pathpol/interferometry.hpp"
#include "pathpol/invariants.hpp"
#include "pathpol/io.hpp"
#include "pathpol/matcore.hpp"
#include "pathpol/maxent.hpp"
#include "pathpol/observables.hpp"
#include "pathpol/rng.hpp"
#include "pathpol/states.hpp"
