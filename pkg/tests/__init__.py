"""Test suite for chipfire."""
