#pragma once

#include "itw/errors.hpp"
#include "itw/family.hpp"
#include "itw/io.hpp"
#include "itw/linalg.hpp"
#include "itw/models.hpp"
#include "itw/partner.hpp"
#include "itw/report.hpp"
#include "itw/riesz.hpp"
#include "itw/rng.hpp"
#include "itw/runner.hpp"
#include "itw/suite.hpp"
