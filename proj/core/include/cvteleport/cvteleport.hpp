#pragma once

#include "cvteleport/errors.hpp"
#include "cvteleport/phase_point.hpp"
#include "cvteleport/gaussian_state.hpp"
#include "cvteleport/gaussian_ops.hpp"
#include "cvteleport/resource.hpp"
#include "cvteleport/realizability.hpp"
#include "cvteleport/teleport.hpp"
#include "cvteleport/mc.hpp"
