#ifndef HPW_HPW_HPP
#define HPW_HPW_HPP

#include "hpw/bloch.hpp"
#include "hpw/curve.hpp"
#include "hpw/expr.hpp"
#include "hpw/halfnorm.hpp"
#include "hpw/linemax.hpp"
#include "hpw/scaled.hpp"
#include "hpw/theorems.hpp"
#include "hpw/weights.hpp"

#endif  // HPW_HPW_HPP
