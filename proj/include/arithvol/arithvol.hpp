#pragma once

#include "arithvol/characteristic.hpp"
#include "arithvol/errors.hpp"
#include "arithvol/exponent.hpp"
#include "arithvol/fujita.hpp"
#include "arithvol/norms.hpp"
#include "arithvol/numbers.hpp"
#include "arithvol/quadrature.hpp"
#include "arithvol/sections.hpp"
#include "arithvol/theta.hpp"
#include "arithvol/volume.hpp"
#include "arithvol/zariski.hpp"
