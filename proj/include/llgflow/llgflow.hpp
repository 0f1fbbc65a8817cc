// Umbrella header.
#pragma once

#include "core.hpp"
#include "dnls.hpp"
#include "hasimoto.hpp"
#include "norms.hpp"
#include "ode.hpp"
#include "selfsim.hpp"
#include "semigroup.hpp"
#include "special.hpp"
#include "stereo.hpp"
