# Tests for bangla-fakenews-gru
