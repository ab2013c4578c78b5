#pragma once

#include "bellkit/bd_states.hpp"
#include "bellkit/errors.hpp"
#include "bellkit/linalg.hpp"
#include "bellkit/lqcc.hpp"
#include "bellkit/measures.hpp"
#include "bellkit/oracle.hpp"
#include "bellkit/suite.hpp"
