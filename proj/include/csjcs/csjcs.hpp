// SPDX-License-Identifier: Apache-2.0
//
// csjcs - compressive-sidelobe joint communication and sensing
// Copyright (C) 2026 The csjcs authors
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

#pragma once

#include "csjcs/types.hpp"
#include "csjcs/random.hpp"
#include "csjcs/array_model.hpp"
#include "csjcs/channel.hpp"
#include "csjcs/frame.hpp"
#include "csjcs/waveform.hpp"
#include "csjcs/sensing.hpp"
#include "csjcs/jcs.hpp"
#include "csjcs/experiments.hpp"
#include "csjcs/io.hpp"
