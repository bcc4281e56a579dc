#pragma once

#include "weil_lab/errors.hpp"
#include "weil_lab/quadrature.hpp"
#include "weil_lab/grid.hpp"
#include "weil_lab/test_function.hpp"
#include "weil_lab/special_fn.hpp"
#include "weil_lab/zero_catalog.hpp"
#include "weil_lab/debranges.hpp"
#include "weil_lab/weil_form.hpp"
#include "weil_lab/hilbert_polya.hpp"
