// Copyright 2026 The comseq Authors
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

#pragma once

#include "comseq/common.hpp"
#include "comseq/communities.hpp"
#include "comseq/coverage.hpp"
#include "comseq/discretize.hpp"
#include "comseq/emergence.hpp"
#include "comseq/generator.hpp"
#include "comseq/measures.hpp"
#include "comseq/miner.hpp"
#include "comseq/network.hpp"
#include "comseq/partition.hpp"
#include "comseq/pipeline.hpp"
#include "comseq/seqdb.hpp"
