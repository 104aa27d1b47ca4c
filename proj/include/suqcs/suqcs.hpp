// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "acceptance.hpp"
#include "basis.hpp"
#include "cocycles.hpp"
#include "config.hpp"
#include "critical.hpp"
#include "dlsv.hpp"
#include "forms.hpp"
#include "fourier.hpp"
#include "ncpoly.hpp"
#include "q0_canonical.hpp"
#include "random_forms.hpp"
#include "seq_op.hpp"
#include "shift_op.hpp"
#include "symbols.hpp"
#include "word_expr.hpp"
#include "zeta.hpp"
