#pragma once

// Umbrella header for the ruled submanifold toolkit.

#include "ruled/builtins.hpp"
#include "ruled/classify.hpp"
#include "ruled/distribution.hpp"
#include "ruled/error.hpp"
#include "ruled/field.hpp"
#include "ruled/framed_curve.hpp"
#include "ruled/multilinear.hpp"
#include "ruled/parametric.hpp"
#include "ruled/report.hpp"
#include "ruled/ruledgeom.hpp"
#include "ruled/scene.hpp"
#include "ruled/spline.hpp"
#include "ruled/striction.hpp"
#include "ruled/tolerance.hpp"
