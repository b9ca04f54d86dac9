#pragma once

#include "bwmean/core.hpp"
#include "bwmean/means.hpp"
#include "bwmean/bures_wasserstein.hpp"
#include "bwmean/report.hpp"
#include "bwmean/barycenter.hpp"
#include "bwmean/products.hpp"
#include "bwmean/verify.hpp"
