// Copyright 2026 The kickwell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "kickwell/basis.hpp"
#include "kickwell/bessel.hpp"
#include "kickwell/config.hpp"
#include "kickwell/csv.hpp"
#include "kickwell/dephase.hpp"
#include "kickwell/entangle.hpp"
#include "kickwell/error.hpp"
#include "kickwell/evolve.hpp"
#include "kickwell/harness.hpp"
#include "kickwell/kick_operator.hpp"
#include "kickwell/potential.hpp"
#include "kickwell/quadrature.hpp"
