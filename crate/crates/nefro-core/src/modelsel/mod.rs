//! Regression model selection policy and comparison analytics.
