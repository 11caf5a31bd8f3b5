// Copyright 2026 The tokfl Authors.
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

#include "tokfl/bpe.hpp"
#include "tokfl/byte_transform.hpp"
#include "tokfl/common.hpp"
#include "tokfl/grammar.hpp"
#include "tokfl/recognizer.hpp"
#include "tokfl/sample.hpp"
#include "tokfl/token_recognizer.hpp"
#include "tokfl/tokenization_space.hpp"
#include "tokfl/tokenizer_io.hpp"
#include "tokfl/verify.hpp"
