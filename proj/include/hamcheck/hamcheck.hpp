#ifndef HAMCHECK_HAMCHECK_HPP
#define HAMCHECK_HAMCHECK_HPP

#include "hamcheck/cdop.hpp"
#include "hamcheck/diffpoly.hpp"
#include "hamcheck/dsl.hpp"
#include "hamcheck/equiv.hpp"
#include "hamcheck/eqsys.hpp"
#include "hamcheck/error.hpp"
#include "hamcheck/jet.hpp"
#include "hamcheck/jetalg.hpp"
#include "hamcheck/kernels.hpp"
#include "hamcheck/kuper.hpp"
#include "hamcheck/multivec.hpp"
#include "hamcheck/render.hpp"
#include "hamcheck/report.hpp"
#include "hamcheck/runner.hpp"

#endif  // HAMCHECK_HAMCHECK_HPP
