/*
 * Copyright 2026 The ontomatch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "ontomatch/alignment.hpp"
#include "ontomatch/config.hpp"
#include "ontomatch/embedding.hpp"
#include "ontomatch/error.hpp"
#include "ontomatch/evaluation.hpp"
#include "ontomatch/llm.hpp"
#include "ontomatch/matcher.hpp"
#include "ontomatch/ontology.hpp"
#include "ontomatch/pipeline.hpp"
#include "ontomatch/retrieval.hpp"
#include "ontomatch/synthetic.hpp"
