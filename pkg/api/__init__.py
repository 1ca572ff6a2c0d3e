# bebound - HTTP service package
