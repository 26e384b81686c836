#pragma once

#include "aou/age.hpp"
#include "aou/association.hpp"
#include "aou/channel.hpp"
#include "aou/convex.hpp"
#include "aou/driver.hpp"
#include "aou/energy.hpp"
#include "aou/program.hpp"
#include "aou/random.hpp"
#include "aou/scenario.hpp"
#include "aou/solver.hpp"
