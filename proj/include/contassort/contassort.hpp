#pragma once

#include "contassort/assortment.hpp"
#include "contassort/choice.hpp"
#include "contassort/errors.hpp"
#include "contassort/harness.hpp"
#include "contassort/instances.hpp"
#include "contassort/io.hpp"
#include "contassort/kde.hpp"
#include "contassort/legendre.hpp"
#include "contassort/model.hpp"
#include "contassort/policies.hpp"
#include "contassort/quadrature.hpp"
#include "contassort/rng.hpp"
#include "contassort/solver.hpp"
