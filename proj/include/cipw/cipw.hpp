/*
 Copyright 2026 The cipw Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef CIPW_CIPW_HPP
#define CIPW_CIPW_HPP

#include "cipw/config.hpp"
#include "cipw/controller.hpp"
#include "cipw/digest.hpp"
#include "cipw/dynamics.hpp"
#include "cipw/equilibrium.hpp"
#include "cipw/error.hpp"
#include "cipw/experiments.hpp"
#include "cipw/grid.hpp"
#include "cipw/integrator.hpp"
#include "cipw/learning.hpp"
#include "cipw/measurement.hpp"
#include "cipw/params.hpp"
#include "cipw/serialization.hpp"
#include "cipw/simulate.hpp"
#include "cipw/standing.hpp"
#include "cipw/state.hpp"
#include "cipw/table.hpp"
#include "cipw/table_io.hpp"
#include "cipw/validation.hpp"

#endif // CIPW_CIPW_HPP
