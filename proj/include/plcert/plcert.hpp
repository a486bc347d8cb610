#pragma once

// Umbrella header. json_io.hpp expects nlohmann's json.hpp on the include
// path (vendored; wired up by the CMake target).

#include "plcert/certify.hpp"
#include "plcert/degree.hpp"
#include "plcert/errors.hpp"
#include "plcert/harness.hpp"
#include "plcert/json_io.hpp"
#include "plcert/linalg.hpp"
#include "plcert/lp.hpp"
#include "plcert/pl_function.hpp"
#include "plcert/polyhedron.hpp"
#include "plcert/polyhedron_queries.hpp"
#include "plcert/rational.hpp"
#include "plcert/render.hpp"
