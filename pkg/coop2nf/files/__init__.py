"""File codecs for worth games, normal-form games and reports."""
