#pragma once

#include "qq/errors.hpp"
#include "qq/qlaurent.hpp"
#include "qq/xpoly.hpp"
#include "qq/xrat.hpp"
#include "qq/ncalgebra.hpp"
#include "qq/ctengine.hpp"
#include "qq/repdiff.hpp"
#include "qq/verify.hpp"
#include "qq/serialize.hpp"
#include "qq/cli.hpp"
