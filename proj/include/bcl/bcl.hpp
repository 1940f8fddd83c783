#pragma once

#include "bcl/error.hpp"
#include "bcl/feature_set.hpp"
#include "bcl/vocabulary.hpp"
#include "bcl/formula.hpp"
#include "bcl/syntax.hpp"
#include "bcl/term.hpp"
#include "bcl/model.hpp"
#include "bcl/rules.hpp"
#include "bcl/decision_model.hpp"
#include "bcl/checker.hpp"
#include "bcl/counterfactual.hpp"
#include "bcl/explain.hpp"
#include "bcl/dynamics.hpp"
#include "bcl/epistemic.hpp"
#include "bcl/prop.hpp"
#include "bcl/solver.hpp"
#include "bcl/random_formula.hpp"
#include "bcl/model_io.hpp"
