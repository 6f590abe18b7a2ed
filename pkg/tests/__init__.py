"""Tests for YouTube Playlist Creator."""
