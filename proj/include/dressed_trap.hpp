#pragma once

#include "dressed_trap/error.hpp"
#include "dressed_trap/physics.hpp"
#include "dressed_trap/dressed.hpp"
#include "dressed_trap/spin_matrix.hpp"
#include "dressed_trap/scenario.hpp"
#include "dressed_trap/minimize.hpp"
#include "dressed_trap/landscape.hpp"
#include "dressed_trap/dynamics.hpp"
#include "dressed_trap/io.hpp"
#include "dressed_trap/commands.hpp"
