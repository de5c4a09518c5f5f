var account = {
  owner: "ada",
  balance: 100,
  describe: function () { return this.owner + ":" + this.balance; },
  deposit: function (n) { this.balance += n; return this.describe(); },
};
out(account.deposit(23));
var borrowed = account.describe;
out(borrowed.call({ owner: "bob", balance: 1 }));
out(account.describe.apply({ owner: "eve", balance: 7 }, []));
