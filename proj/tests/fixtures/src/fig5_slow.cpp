int x, y;
cin >> x >> y;
int res = gcd(x, y);
cout << res << endl;
