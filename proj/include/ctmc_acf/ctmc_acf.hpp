#ifndef CTMC_ACF_CTMC_ACF_HPP
#define CTMC_ACF_CTMC_ACF_HPP

#include "acf.hpp"
#include "error.hpp"
#include "lpnorm.hpp"
#include "model.hpp"
#include "pointproc.hpp"
#include "random.hpp"
#include "simulate.hpp"
#include "spectral.hpp"
#include "transient.hpp"

#endif  // CTMC_ACF_CTMC_ACF_HPP
