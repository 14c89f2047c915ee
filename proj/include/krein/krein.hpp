#pragma once

#include "krein/linalg.hpp"
#include "krein/krein_core.hpp"
#include "krein/c_operator.hpp"
#include "krein/transition.hpp"
#include "krein/csymmetry.hpp"
#include "krein/point_interaction.hpp"
#include "krein/direct_sum.hpp"
#include "krein/io.hpp"
