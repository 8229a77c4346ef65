// SPDX-License-Identifier: Apache-2.0
//
// ris-pdpr: pilot power and RIS phase configuration for RIS-assisted uplink MIMO
// Copyright (C) 2026 The ris-pdpr authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RIS_PDPR_HPP
#define RIS_PDPR_HPP

#include "ris_pdpr/analysis.hpp"
#include "ris_pdpr/channel.hpp"
#include "ris_pdpr/estimation.hpp"
#include "ris_pdpr/experiments.hpp"
#include "ris_pdpr/geometry.hpp"
#include "ris_pdpr/montecarlo.hpp"
#include "ris_pdpr/random.hpp"
#include "ris_pdpr/receiver.hpp"
#include "ris_pdpr/risopt.hpp"
#include "ris_pdpr/types.hpp"
#include "ris_pdpr/verification.hpp"

#endif
