#pragma once

#include "yamabe/core/chart.hpp"
#include "yamabe/core/conformal.hpp"
#include "yamabe/core/curvature.hpp"
#include "yamabe/core/errors.hpp"
#include "yamabe/core/field.hpp"
#include "yamabe/core/metric.hpp"
#include "yamabe/core/models.hpp"
#include "yamabe/core/quadrature.hpp"
#include "yamabe/invariants/invariants.hpp"
#include "yamabe/neck/assembly.hpp"
#include "yamabe/neck/bend.hpp"
#include "yamabe/neck/blowup.hpp"
#include "yamabe/neck/homotopy.hpp"
#include "yamabe/neck/profiles.hpp"
#include "yamabe/neck/tube.hpp"
#include "yamabe/reduction/averaging.hpp"
#include "yamabe/reduction/minimize.hpp"
#include "yamabe/reduction/orbit_profile.hpp"
