#pragma once

// Umbrella header.

#include "torsionfield/basis.hpp"
#include "torsionfield/config.hpp"
#include "torsionfield/connection.hpp"
#include "torsionfield/curvature.hpp"
#include "torsionfield/fields.hpp"
#include "torsionfield/geodesic.hpp"
#include "torsionfield/laplacian.hpp"
#include "torsionfield/linalg.hpp"
#include "torsionfield/manifold.hpp"
#include "torsionfield/quadrature.hpp"
#include "torsionfield/random_field.hpp"
#include "torsionfield/report.hpp"
#include "torsionfield/rk4.hpp"
#include "torsionfield/rng.hpp"
#include "torsionfield/stoch_connection.hpp"
#include "torsionfield/stoch_curvature.hpp"
#include "torsionfield/transport.hpp"
#include "torsionfield/verify.hpp"
