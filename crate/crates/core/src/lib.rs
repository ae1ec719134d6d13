pub mod arith;
pub mod finfield;
pub mod permgrp;
pub mod cyclo;
pub mod grpzoo;
pub mod chartab;
pub mod blocks;
pub mod classify;
pub mod pipeline;
