#pragma once

#include "ifpp/defects.hpp"
#include "ifpp/dist.hpp"
#include "ifpp/env.hpp"
#include "ifpp/errors.hpp"
#include "ifpp/estimate.hpp"
#include "ifpp/fpp.hpp"
#include "ifpp/geometry.hpp"
#include "ifpp/io.hpp"
#include "ifpp/rng.hpp"
#include "ifpp/shape.hpp"
