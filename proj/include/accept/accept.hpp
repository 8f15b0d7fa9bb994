// Copyright 2026 The accept Authors.
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

#include "accept/automaton.hpp"
#include "accept/frequencies.hpp"
#include "accept/game.hpp"
#include "accept/game_io.hpp"
#include "accept/lp.hpp"
#include "accept/markov.hpp"
#include "accept/minmax.hpp"
#include "accept/one_shot.hpp"
#include "accept/pipeline.hpp"
#include "accept/profile_builder.hpp"
#include "accept/report_json.hpp"
#include "accept/simulate.hpp"
#include "accept/structure.hpp"
#include "accept/verifier.hpp"
