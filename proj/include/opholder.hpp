// Copyright 2026 The opholder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * @brief Umbrella header.
 */

#pragma once

#include "opholder/campaign.hpp"
#include "opholder/doi.hpp"
#include "opholder/errors.hpp"
#include "opholder/functions.hpp"
#include "opholder/io.hpp"
#include "opholder/lab.hpp"
#include "opholder/norms.hpp"
#include "opholder/numerics.hpp"
#include "opholder/randgen.hpp"
#include "opholder/spectral.hpp"
#include "opholder/version.hpp"
