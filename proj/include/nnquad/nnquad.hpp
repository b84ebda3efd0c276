#pragma once

#include "nnquad/cnf.hpp"
#include "nnquad/compile.hpp"
#include "nnquad/decide.hpp"
#include "nnquad/matenc.hpp"
#include "nnquad/network.hpp"
#include "nnquad/onelayer.hpp"
#include "nnquad/pde.hpp"
#include "nnquad/quadrature.hpp"
#include "nnquad/serialize.hpp"
#include "nnquad/sobol.hpp"
#include "nnquad/special.hpp"
#include "nnquad/testnets.hpp"
