#pragma once

#include "g2k/error.hpp"
#include "g2k/field.hpp"
#include "g2k/poly.hpp"
#include "g2k/matrix.hpp"
#include "g2k/forms.hpp"
#include "g2k/curve.hpp"
#include "g2k/kummer.hpp"
#include "g2k/jacobian.hpp"
#include "g2k/synthesis.hpp"
#include "g2k/ladder.hpp"
#include "g2k/verify.hpp"
