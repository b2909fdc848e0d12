#pragma once

#include "conic_defense/adversary.hpp"
#include "conic_defense/engine.hpp"
#include "conic_defense/errors.hpp"
#include "conic_defense/geometry.hpp"
#include "conic_defense/instances.hpp"
#include "conic_defense/io.hpp"
#include "conic_defense/oracle.hpp"
#include "conic_defense/policies.hpp"
#include "conic_defense/regime.hpp"
#include "conic_defense/trace.hpp"
