#pragma once

#include "tgq/classify.hpp"
#include "tgq/errors.hpp"
#include "tgq/numeric.hpp"
#include "tgq/oracle.hpp"
#include "tgq/report.hpp"
#include "tgq/signature.hpp"
#include "tgq/tower.hpp"
#include "tgq/triangle.hpp"
