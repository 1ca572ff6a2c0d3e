from bebound.cli import main

main()
