#pragma once

#include "abelcode/arith.hpp"
#include "abelcode/int_matrix.hpp"
#include "abelcode/smith.hpp"
#include "abelcode/solve.hpp"
#include "abelcode/window.hpp"
#include "abelcode/subgroup.hpp"
#include "abelcode/template_spec.hpp"
#include "abelcode/torsion.hpp"
#include "abelcode/controllability.hpp"
#include "abelcode/encoder.hpp"
#include "abelcode/io.hpp"
